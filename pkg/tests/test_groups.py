"""Finite groups, subgroup machinery, presentations, and homomorphisms."""

from itertools import combinations

import pytest

from permstab.errors import (
    BoundExceededError,
    GroupTableError,
    NotSubgroupError,
    SourceMismatchError,
    WordError,
)
from permstab.fixtures import klein_pair, klein_presentation
from permstab.groups import (
    FiniteGroup,
    FpGroup,
    PermHomomorphism,
    Subgroup,
    all_subgroups,
    check_homomorphism,
    coset_action,
    cyclic_group,
    dihedral_group,
    direct_product,
    direct_sum_hom,
    evaluate_word,
    group_from_permutations,
    hom_from_generator_images,
    klein_four_group,
    normalizer,
    parse_word,
    quaternion_group,
    subgroup_closure,
    subgroup_conjugacy_classes,
    symmetric_group,
    trivial_hom,
    trivial_subgroup,
    full_subgroup,
)
from permstab.perm import Permutation, all_permutations, parse_permutation
from permstab.trace_stats import action_trace

from conftest import subgroup_from_cycles


def brute_force_subgroup_sets(G):
    """Independent oracle: scan all subsets containing the identity."""
    found = []
    others = [x for x in G.elements() if x != G.identity]
    for k in range(len(others) + 1):
        for extra in combinations(others, k):
            members = {G.identity, *extra}
            closed = all(
                G.mul(a, b) in members for a in members for b in members
            ) and all(G.inv(a) in members for a in members)
            if closed:
                found.append(frozenset(members))
    return set(found)


class TestFiniteGroup:
    def test_cyclic_basics(self):
        G = cyclic_group(4)
        assert G.order == 4
        assert G.identity == 0
        assert G.inv(1) == 3
        assert G.element_order(1) == 4

    def test_bad_table_rejected(self):
        with pytest.raises(GroupTableError):
            FiniteGroup([[0, 1], [0, 1]])

    def test_non_associative_rejected(self):
        # commutative quasigroup without associativity
        with pytest.raises(GroupTableError):
            FiniteGroup(
                [
                    [0, 1, 2, 3, 4],
                    [1, 0, 3, 4, 2],
                    [2, 3, 4, 0, 1],
                    [3, 4, 2, 1, 0],
                    [4, 2, 1, 0, 3],
                ]
            )


class TestGroupFromPermutations:
    def test_s3_closure(self):
        G, nat = group_from_permutations(
            [parse_permutation("(1 2)", 3), parse_permutation("(1 2 3)", 3)]
        )
        assert G.order == 6
        assert set(nat.images) == set(all_permutations(3))
        assert check_homomorphism(nat).ok

    def test_trivial(self):
        G, _ = group_from_permutations([Permutation.identity(4)])
        assert G.order == 1

    def test_cyclic4(self):
        G, nat = group_from_permutations([parse_permutation("(1 2 3 4)", 4)])
        assert G.order == 4
        # brute-force closure oracle
        gen = parse_permutation("(1 2 3 4)", 4)
        expected = {gen**k for k in range(4)}
        assert set(nat.images) == expected

    def test_order_bound(self):
        with pytest.raises(BoundExceededError):
            group_from_permutations(
                [
                    parse_permutation("(1 2)", 6),
                    parse_permutation("(1 2 3 4 5 6)", 6),
                ],
                max_order=100,
            )

    def test_identity_gets_id_zero(self):
        G, nat = symmetric_group(3)
        assert nat.images[0] == Permutation.identity(3)


class TestAllSubgroups:
    def test_s3(self):
        G, _ = symmetric_group(3)
        assert len(all_subgroups(G)) == 6

    def test_z4(self):
        assert len(all_subgroups(cyclic_group(4))) == 3

    def test_trivial_group(self):
        assert len(all_subgroups(cyclic_group(1))) == 1

    @pytest.mark.parametrize(
        "maker",
        [
            lambda: cyclic_group(6),
            lambda: klein_four_group(),
            lambda: symmetric_group(3)[0],
            lambda: dihedral_group(4)[0],
            lambda: quaternion_group()[0],
            lambda: direct_product(cyclic_group(2), cyclic_group(4)),
            lambda: cyclic_group(12),
            lambda: dihedral_group(6)[0],
        ],
    )
    def test_matches_subset_bruteforce(self, maker):
        G = maker()
        got = {s.member_set() for s in all_subgroups(G)}
        assert got == brute_force_subgroup_sets(G)

    def test_s4_known_count(self):
        # order 24 is out of subset-scan reach; 30 is the classical count
        G, _ = symmetric_group(4)
        subs = all_subgroups(G)
        assert len(subs) == 30
        assert len({s.member_set() for s in subs}) == 30

    def test_every_entry_is_validated(self, zoo8):
        for G in zoo8.values():
            for s in all_subgroups(G):
                Subgroup(G, s.members)  # re-runs closure/identity checks

    def test_bound(self):
        with pytest.raises(BoundExceededError):
            all_subgroups(cyclic_group(6), order_bound=5)


class TestConjugacyClasses:
    def test_s3_classes(self):
        G, _ = symmetric_group(3)
        classes = subgroup_conjugacy_classes(G)
        assert sorted(len(c) for c in classes.classes) == [1, 1, 1, 3]

    def test_abelian_all_singletons(self):
        for G in (cyclic_group(8), klein_four_group()):
            classes = subgroup_conjugacy_classes(G)
            assert all(len(c) == 1 for c in classes.classes)

    def test_trivial_group(self):
        assert len(subgroup_conjugacy_classes(cyclic_group(1))) == 1

    def test_class_size_equals_normalizer_index(self, zoo8):
        for G in zoo8.values():
            classes = subgroup_conjugacy_classes(G)
            for cid, orbit in enumerate(classes.classes):
                rep = classes.representative(cid)
                M = normalizer(G, rep)
                assert len(orbit) == G.order // M.order


class TestNormalizer:
    def test_self_normalizing_transposition(self):
        G, nat = symmetric_group(3)
        H = subgroup_from_cycles(G, nat, "(1 2)")
        assert normalizer(G, H).members == H.members

    def test_normal_subgroup(self):
        G, nat = symmetric_group(3)
        A3 = subgroup_from_cycles(G, nat, "(1 2 3)")
        assert normalizer(G, A3).order == 6

    def test_whole_group(self):
        G = cyclic_group(6)
        assert normalizer(G, full_subgroup(G)).order == 6


class TestCosetAction:
    def test_index_three(self):
        G, nat = symmetric_group(3)
        H = subgroup_from_cycles(G, nat, "(1 2)")
        act = coset_action(G, H)
        assert act.degree == 3
        # transitive
        orbit = {1}
        for g in G.elements():
            orbit |= {act.images[g](x) for x in list(orbit)}
        assert orbit == {1, 2, 3}

    def test_whole_group_degree_one(self):
        G = cyclic_group(5)
        act = coset_action(G, full_subgroup(G))
        assert act.degree == 1

    def test_regular_action_traces(self):
        G = cyclic_group(4)
        act = coset_action(G, trivial_subgroup(G))
        assert act.degree == 4
        for g in range(1, 4):
            assert action_trace(act, [g]) == 0

    def test_stabilizer_is_the_subgroup(self, zoo8):
        for G in zoo8.values():
            for H in all_subgroups(G):
                act = coset_action(G, H)
                # the point carrying the coset of the identity
                base = next(
                    x
                    for x in range(1, act.degree + 1)
                    if {g for g in G.elements() if act.images[g](x) == x}
                    == set(H.members)
                )
                assert base is not None

    def test_orbit_stabilizer_identity(self, zoo8):
        for G in zoo8.values():
            for H in all_subgroups(G):
                act = coset_action(G, H)
                assert act.degree * H.order == G.order

    def test_all_coset_actions_verify(self, zoo8):
        for G in zoo8.values():
            for H in all_subgroups(G):
                assert check_homomorphism(coset_action(G, H)).ok


class TestWords:
    def test_parse_word_syntax(self):
        P = FpGroup(("s", "t"))
        assert parse_word("s^2 t^-3", P.generators) == ((0, 2), (1, -3))
        assert parse_word("s t s", P.generators) == ((0, 1), (1, 1), (0, 1))

    def test_unknown_generator(self):
        with pytest.raises(WordError):
            parse_word("u^2", ("s", "t"))

    def test_empty_word_evaluates_to_identity(self):
        P = FpGroup(("x",))
        h = PermHomomorphism(P, 3, (parse_permutation("(1 2 3)", 3),))
        assert evaluate_word(h, "") == Permutation.identity(3)

    def test_cancellation(self):
        P = FpGroup(("x",))
        h = PermHomomorphism(P, 4, (parse_permutation("(1 2 3 4)", 4),))
        assert evaluate_word(h, "x x^-1") == Permutation.identity(4)

    def test_baumslag_solitar_relator(self):
        # t^-1 x t = x^2 holds for x -> (1 2 3), t -> (2 3)
        P = FpGroup(("x", "t"), ("t^-1 x t x^-2",))
        good = PermHomomorphism(
            P, 3, (parse_permutation("(1 2 3)", 3), parse_permutation("(2 3)", 3))
        )
        assert check_homomorphism(good).ok
        bad = PermHomomorphism(
            P, 3, (parse_permutation("(1 2 3)", 3), Permutation.identity(3))
        )
        chk = check_homomorphism(bad)
        assert not chk.ok
        assert chk.witness == parse_word("t^-1 x t x^-2", P.generators)


class TestCheckHomomorphism:
    def test_klein_pair_valid(self):
        t1, t2 = klein_pair()
        assert check_homomorphism(t1).ok
        assert check_homomorphism(t2).ok

    def test_order_violation_detected(self):
        G = klein_four_group()
        c = parse_permutation("(1 2 3)", 3)
        bad = PermHomomorphism(
            G, 3, (Permutation.identity(3), c, c, c * c)
        )
        chk = check_homomorphism(bad)
        assert not chk.ok
        assert chk.witness is not None

    def test_free_group_unconstrained(self):
        P = FpGroup(("x", "y"))
        h = PermHomomorphism(
            P, 4, (parse_permutation("(1 2 3 4)", 4), parse_permutation("(1 3)", 4))
        )
        assert check_homomorphism(h).ok

    def test_presented_klein_valid(self):
        P = klein_presentation()
        h = PermHomomorphism(
            P, 6, (parse_permutation("(1 2)(3 4)", 6), parse_permutation("(1 2)(5 6)", 6))
        )
        assert check_homomorphism(h).ok


class TestHomBuilders:
    def test_from_generator_images(self):
        G, nat = symmetric_group(3)
        # send (1 2) -> (1 2), (1 2 3) -> (1 2 3): the natural action
        gens = {2: parse_permutation("(1 2)", 3), 3: parse_permutation("(1 2 3)", 3)}
        h = hom_from_generator_images(G, gens, 3)
        assert h == nat

    def test_inconsistent_images_rejected(self):
        G = cyclic_group(4)
        with pytest.raises(SourceMismatchError):
            hom_from_generator_images(G, {1: parse_permutation("(1 2 3)", 3)}, 3)

    def test_direct_sum_hom(self):
        G = cyclic_group(2)
        h = PermHomomorphism(
            G, 2, (Permutation.identity(2), parse_permutation("(1 2)", 2))
        )
        s = direct_sum_hom(h, trivial_hom(G, 1))
        assert s.degree == 3
        assert s.images[1] == parse_permutation("(1 2)", 3)

    def test_subgroup_as_group_roundtrip(self):
        G, nat = symmetric_group(3)
        A3 = subgroup_closure(G, [nat.images.index(parse_permutation("(1 2 3)", 3))])
        Habs, emb = A3.as_group()
        assert Habs.order == 3
        for i, g in enumerate(emb):
            for j, h in enumerate(emb):
                assert emb[Habs.mul(i, j)] == G.mul(g, h)

    def test_subgroup_invariants_rejected(self):
        G = cyclic_group(4)
        with pytest.raises(NotSubgroupError):
            Subgroup(G, [0, 1])  # not closed
