"""Command dispatch, exit codes, determinism, and error objects."""

import json

import pytest

from permstab.cli import EXIT_BADFILE, EXIT_DOMAIN, EXIT_OK, EXIT_USAGE, dispatch


@pytest.fixture()
def files(tmp_path):
    """A small corpus of input files used across CLI tests."""

    def write(name, obj):
        path = tmp_path / name
        path.write_text(json.dumps(obj))
        return str(path)

    klein = {
        "kind": "presentation",
        "generators": ["a", "b"],
        "relators": ["a^2", "b^2", "a b a b"],
    }
    klein_table = {
        "kind": "table",
        "order": 4,
        "table": [[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]],
    }
    z2 = {"kind": "table", "order": 2, "table": [[0, 1], [1, 0]]}
    paths = {
        "theta1": write(
            "theta1.json",
            {
                "group": klein_table,
                "degree": 6,
                "images": {
                    "0": "()",
                    "1": "(1 2)(5 6)",
                    "2": "(1 2)(3 4)",
                    "3": "(3 4)(5 6)",
                },
            },
        ),
        "theta2": write(
            "theta2.json",
            {
                "group": klein_table,
                "degree": 6,
                "images": {
                    "0": "()",
                    "1": "(1 3)(2 4)",
                    "2": "(1 2)(3 4)",
                    "3": "(1 4)(2 3)",
                },
            },
        ),
        "theta2_words": write(
            "theta2w.json",
            {
                "group": klein,
                "degree": 6,
                "images": {"a": "(1 2)(3 4)", "b": "(1 3)(2 4)"},
            },
        ),
        "phi1": write(
            "phi1.json",
            {
                "group": z2,
                "degree": 10,
                "images": {"0": "()", "1": "(1 2)(3 4)"},
            },
        ),
        "phi2": write(
            "phi2.json",
            {
                "group": z2,
                "degree": 10,
                "images": {"0": "()", "1": "(1 2)(5 6)"},
            },
        ),
        "phi1_s8": write(
            "phi1_s8.json",
            {
                "group": z2,
                "degree": 8,
                "images": {"0": "()", "1": "(1 2)(3 4)"},
            },
        ),
        "phi2_s8": write(
            "phi2_s8.json",
            {
                "group": z2,
                "degree": 8,
                "images": {"0": "()", "1": "(1 2)(5 6)"},
            },
        ),
        "s3": write(
            "s3.json",
            {
                "kind": "perm-gens",
                "degree": 3,
                "generators": ["(1 2)", "(1 2 3)"],
                "names": ["u", "v"],
            },
        ),
        "a3_members": write("a3.json", {"members": [0, 3, 4]}),
        "t12_members": write("t12.json", {"members": [0, 2]}),
        "z3_regular": write(
            "z3reg.json",
            {
                "group": {
                    "kind": "table",
                    "order": 3,
                    "table": [[0, 1, 2], [1, 2, 0], [2, 0, 1]],
                },
                "degree": 3,
                "images": {"0": "()", "1": "(1 2 3)", "2": "(1 3 2)"},
            },
        ),
        "psi_s": write(
            "psi_s.json",
            {
                "group": {"kind": "presentation", "generators": ["s"], "relators": ["s^4"]},
                "degree": 4,
                "images": {"s": "(1 2 3 4)"},
            },
        ),
        "psi_t": write(
            "psi_t.json",
            {
                "group": {"kind": "presentation", "generators": ["t"], "relators": ["t^6"]},
                "degree": 4,
                "images": {"t": "(1 3)(2 4)"},
            },
        ),
        "psi_t_bad": write(
            "psi_t_bad.json",
            {
                "group": {"kind": "presentation", "generators": ["t"], "relators": ["t^6"]},
                "degree": 4,
                "images": {"t": "(1 2)"},
            },
        ),
        "hmap": write(
            "hmap.json",
            {"pairs": [["s^2", "t^3"]], "relators": ["s^4", "t^6", "s^2 t^-3"]},
        ),
        "graph_hom": write(
            "graph.json",
            {
                "group": {"kind": "presentation", "generators": ["x"], "relators": []},
                "degree": 3,
                "images": {"x": "(1 2 3)"},
            },
        ),
        "graph_id": write(
            "graph_id.json",
            {
                "group": {"kind": "presentation", "generators": ["x"], "relators": []},
                "degree": 3,
                "images": {"x": "()"},
            },
        ),
        "bad_json": str((tmp_path / "bad.json")),
    }
    (tmp_path / "bad.json").write_text("{oops")
    return paths


class TestBasicCommands:
    def test_trace(self, files):
        code, report = dispatch(["trace", "--hom", files["theta2_words"], "--set", "a,b"])
        assert code == EXIT_OK
        assert report["outputs"] == {"tr": "1/3"}

    def test_trace_table_ids(self, files):
        code, report = dispatch(["trace", "--hom", files["theta1"], "--set", "1,2"])
        assert code == EXIT_OK
        assert report["outputs"] == {"tr": "0"}

    def test_stats(self, files):
        code, report = dispatch(
            ["stats", "--hom", files["theta2_words"], "--fixed", "a", "--moved", "b"]
        )
        assert code == EXIT_OK
        assert report["outputs"] == {"s": "0"}

    def test_mult(self, files):
        code, report = dispatch(["mult", files["theta2"]])
        assert code == EXIT_OK
        rows = report["outputs"]["classes"]
        assert report["outputs"]["degree"] == 6
        assert {r["r"] for r in rows} == {"1/6", "0", "1/3"}

    def test_conj_not_conjugate(self, files):
        code, report = dispatch(["conj", files["theta1"], files["theta2"]])
        assert code == EXIT_OK
        assert report["outputs"] == {"conjugate": False, "witness": None}

    def test_conj_identity_witness(self, files):
        code, report = dispatch(["conj", files["theta1"], files["theta1"]])
        assert code == EXIT_OK
        assert report["outputs"] == {"conjugate": True, "witness": "()"}

    def test_order(self, files):
        code, report = dispatch(["order", files["theta1"], files["theta2"]])
        assert code == EXIT_OK
        assert report["outputs"] == {"leq": False, "geq": False}

    def test_small_conj(self, files):
        code, report = dispatch(["small-conj", files["phi1"], files["phi2"]])
        assert code == EXIT_OK
        out = report["outputs"]
        assert out["conjugator"] == "(3 5)(4 6)"
        assert out["distance"] == "2/5"
        assert out["agreement_size"] == 6

    def test_min_conj(self, files):
        # frozen from an exhaustive scan of all degree-8 conjugators
        code, report = dispatch(["min-conj", files["phi1_s8"], files["phi2_s8"]])
        assert code == EXIT_OK
        assert report["outputs"]["min_distance"] == "1/2"

    def test_min_conj_degree_bound_is_domain_error(self, files):
        code, report = dispatch(["min-conj", files["phi1"], files["phi2"]])
        assert code == EXIT_DOMAIN
        assert report["outputs"]["error"]["code"] == "BoundExceededError"

    def test_extend(self, files):
        code, report = dispatch(
            ["extend", files["s3"], files["a3_members"], files["z3_regular"]]
        )
        assert code == EXIT_OK
        assert report["outputs"]["found"] is True

    def test_complement(self, files):
        code, report = dispatch(["complement", files["s3"], files["t12_members"]])
        assert code == EXIT_OK
        assert report["outputs"] == {"found": True, "complement": [0, 3, 4]}

    def test_amalgam_valid(self, files):
        code, report = dispatch(
            ["amalgam", files["psi_s"], files["psi_t"], "--h-map", files["hmap"]]
        )
        assert code == EXIT_OK
        assert report["outputs"] == {"valid": True, "degree": 4, "relators_ok": True}

    def test_amalgam_mismatch(self, files):
        code, report = dispatch(
            ["amalgam", files["psi_s"], files["psi_t_bad"], "--h-map", files["hmap"]]
        )
        assert code == EXIT_DOMAIN
        err = report["outputs"]["error"]
        assert err["witness"] == ["s^2", "t^3"]

    def test_lift(self, files):
        code, report = dispatch(
            ["lift", files["z3_regular"], files["z3_regular"], "--copies", "2"]
        )
        assert code == EXIT_OK
        assert report["outputs"]["degree"] == 9
        assert report["outputs"]["verified"] is True

    def test_correct(self, files):
        code, report = dispatch(
            [
                "correct",
                "--coef",
                "(1 2 3)",
                "--almost",
                "(1 2)",
                "--degree",
                "3",
                "--mode",
                "exact",
            ]
        )
        assert code == EXIT_OK
        out = report["outputs"]
        assert out["corrected"] == "()"
        assert out["distance"] == "2/3"
        assert out["input_defect"] == "1"

    def test_graph(self, files):
        code, report = dispatch(["graph", files["graph_hom"]])
        assert code == EXIT_OK
        assert report["outputs"]["edges"] == [[1, 2, "x"], [2, 3, "x"], [3, 1, "x"]]

    def test_dstat(self, files):
        code, report = dispatch(
            ["dstat", files["graph_hom"], files["graph_id"], "--size-bound", "2"]
        )
        assert code == EXIT_OK
        assert report["outputs"]["d_stat"] == "13/32"
        assert len(report["outputs"]["per_pattern"]) == 3

    def test_verify_paper(self, files):
        code, report = dispatch(["verify-paper"])
        assert code == EXIT_OK
        checks = report["outputs"]["checks"]
        by_name = {c["name"]: c for c in checks}
        assert by_name["trace theta1 {a,b}"]["pass"]
        assert by_name["theta1, theta2 conjugate"]["pass"]
        assert by_name["hamming distance k=4"]["pass"]
        # the bundled minimum-distance claim is reported honestly as failing
        assert not by_name["min conjugator distance, swapped pair k=2"]["pass"]
        assert by_name["min conjugator distance, swapped pair k=2"]["actual"] == "3/4"
        assert report["outputs"]["all_pass"] is False


class TestExitCodes:
    def test_unknown_subcommand(self):
        code, report = dispatch(["frobnicate"])
        assert code == EXIT_USAGE
        assert report["outputs"]["error"]["code"] == "usage"

    def test_missing_subcommand(self):
        code, _ = dispatch([])
        assert code == EXIT_USAGE

    def test_malformed_file(self, files):
        code, report = dispatch(["mult", files["bad_json"]])
        assert code == EXIT_BADFILE
        assert report["outputs"]["error"]["code"] == "malformed-input"

    def test_missing_file(self):
        code, _ = dispatch(["mult", "/does/not/exist.json"])
        assert code == EXIT_BADFILE

    def test_domain_error(self, files):
        # different degrees: a domain precondition, not a file problem
        code, report = dispatch(["conj", files["phi1"], files["theta1"]])
        assert code == EXIT_DOMAIN
        assert "error" in report["outputs"]

    def test_every_error_is_structured(self, files):
        bad_invocations = [
            ["conj", files["phi1"], files["theta1"]],
            ["mult", files["bad_json"]],
            ["trace", "--hom", files["theta1"], "--set", "a,b"],
            ["correct", "--coef", "(1 9)", "--almost", "()", "--degree", "3"],
        ]
        for argv in bad_invocations:
            code, report = dispatch(argv)
            assert code in (EXIT_DOMAIN, EXIT_BADFILE)
            err = report["outputs"]["error"]
            assert set(err) >= {"code", "message"}


class TestDeterminism:
    def test_outputs_byte_identical(self, files):
        _, rep1 = dispatch(["mult", files["theta2"]])
        _, rep2 = dispatch(["mult", files["theta2"]])
        assert json.dumps(rep1["outputs"]) == json.dumps(rep2["outputs"])

    def test_seed_echoed(self, files):
        _, report = dispatch(["--seed", "7", "conj", files["theta1"], files["theta1"]])
        assert report["seed"] == 7

    def test_inputs_digested(self, files):
        _, report = dispatch(["mult", files["theta2"]])
        digest = report["inputs"][files["theta2"]]
        assert digest.startswith("sha256:")
