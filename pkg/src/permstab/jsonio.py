"""JSON file formats for groups, homomorphisms, and related inputs.

Group files::

    {"kind": "table", "order": n, "table": [[...], ...]}
    {"kind": "perm-gens", "degree": n, "generators": ["(1 2)", ...],
     "names": ["x", "y"]}                      # names optional (g0, g1, ...)
    {"kind": "presentation", "generators": ["s", "t"],
     "relators": ["s^4", "t^6", "s^2 t^-3"]}

Homomorphism files::

    {"group": <inline group or path string>, "degree": n, "images": {...}}

with images keyed by generator name (presentation / perm-gens sources)
or by element id string (table sources, every element required).
Permutations are written in cycle or one-line notation; rationals
serialize as strings like ``"1/3"`` in lowest terms.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Union

from .errors import MalformedInputError, PermStabError
from .groups import (
    FiniteGroup,
    FpGroup,
    PermHomomorphism,
    Subgroup,
    check_homomorphism,
    group_from_permutations,
    hom_from_generator_images,
)
from .perm import Permutation, parse_permutation

GroupLike = Union[FiniteGroup, FpGroup]


def format_rational(x: Fraction) -> str:
    return str(Fraction(x))


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise MalformedInputError(f"invalid rational {text!r}") from exc


def permutation_to_json(p: Permutation) -> dict:
    return {"degree": p.degree, "images": list(p.images)}


def permutation_from_json(obj, degree: int | None = None) -> Permutation:
    if isinstance(obj, str):
        if degree is None:
            raise MalformedInputError(
                "permutation strings need an explicit degree"
            )
        return parse_permutation(obj, degree)
    if isinstance(obj, dict):
        try:
            images = obj["images"]
            deg = obj["degree"]
        except KeyError as exc:
            raise MalformedInputError(f"permutation object missing {exc}") from exc
        if degree is not None and deg != degree:
            raise MalformedInputError(
                f"permutation degree {deg} does not match expected {degree}"
            )
        return Permutation(images)
    raise MalformedInputError(f"cannot read a permutation from {obj!r}")


def _load_json(path: Union[str, Path]) -> object:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise MalformedInputError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInputError(f"{path} is not valid JSON: {exc}") from exc


class LoadedGroup:
    """A group parsed from JSON, remembering how its images are keyed."""

    def __init__(self, group: GroupLike, kind: str,
                 gen_names: tuple[str, ...] = (),
                 gen_elements: tuple[int, ...] = ()):
        self.group = group
        self.kind = kind
        self.gen_names = gen_names
        self.gen_elements = gen_elements  # element ids of named generators


def group_from_json(obj) -> LoadedGroup:
    if isinstance(obj, str):
        obj = _load_json(obj)
    if not isinstance(obj, dict) or "kind" not in obj:
        raise MalformedInputError("group object must carry a 'kind' field")
    kind = obj["kind"]
    try:
        if kind == "table":
            table = obj["table"]
            if obj.get("order") != len(table):
                raise MalformedInputError("stated order differs from table size")
            return LoadedGroup(FiniteGroup(table), "table")
        if kind == "perm-gens":
            degree = obj["degree"]
            gens = [
                permutation_from_json(g, degree) for g in obj["generators"]
            ]
            names = tuple(obj.get("names", [f"g{i}" for i in range(len(gens))]))
            if len(names) != len(gens):
                raise MalformedInputError("one name per generator required")
            G, hom = group_from_permutations(gens)
            ids = tuple(hom.images.index(g) for g in gens)
            return LoadedGroup(G, "perm-gens", names, ids)
        if kind == "presentation":
            return LoadedGroup(
                FpGroup(obj["generators"], obj.get("relators", ())),
                "presentation",
            )
    except MalformedInputError:
        raise
    except PermStabError as exc:
        raise MalformedInputError(str(exc)) from exc
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInputError(f"bad group object: {exc}") from exc
    raise MalformedInputError(f"unknown group kind {kind!r}")


def hom_from_json(obj) -> PermHomomorphism:
    if isinstance(obj, str):
        obj = _load_json(obj)
    if not isinstance(obj, dict):
        raise MalformedInputError("homomorphism object must be a JSON object")
    try:
        loaded = group_from_json(obj["group"])
        degree = int(obj["degree"])
        images = obj["images"]
    except MalformedInputError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInputError(f"bad homomorphism object: {exc}") from exc
    try:
        if loaded.kind == "presentation":
            src = loaded.group
            imgs = tuple(
                permutation_from_json(images[name], degree)
                for name in src.generators
            )
            hom = PermHomomorphism(src, degree, imgs)
        elif loaded.kind == "table":
            G = loaded.group
            if set(images) != {str(g) for g in G.elements()}:
                raise MalformedInputError(
                    "table-group images must cover every element id"
                )
            imgs = tuple(
                permutation_from_json(images[str(g)], degree)
                for g in G.elements()
            )
            hom = PermHomomorphism(G, degree, imgs)
        else:  # perm-gens
            gen_map = {
                elt: permutation_from_json(images[name], degree)
                for name, elt in zip(loaded.gen_names, loaded.gen_elements)
            }
            hom = hom_from_generator_images(loaded.group, gen_map, degree)
    except MalformedInputError:
        raise
    except KeyError as exc:
        raise MalformedInputError(f"missing image for generator {exc}") from exc
    except PermStabError as exc:
        raise MalformedInputError(str(exc)) from exc
    chk = check_homomorphism(hom)
    if not chk.ok:
        raise MalformedInputError(f"images are not a homomorphism: {chk.message}")
    return hom


def subgroup_from_json(obj, G: FiniteGroup) -> Subgroup:
    if isinstance(obj, str):
        obj = _load_json(obj)
    if not isinstance(obj, dict) or "members" not in obj:
        raise MalformedInputError("subgroup object must carry 'members'")
    try:
        return Subgroup(G, [int(x) for x in obj["members"]])
    except PermStabError as exc:
        raise MalformedInputError(str(exc)) from exc
    except (TypeError, ValueError) as exc:
        raise MalformedInputError(f"bad member list: {exc}") from exc


def element_set_from_text(hom: PermHomomorphism, text: str) -> list:
    """Parse a comma-separated element set: words for presentation
    sources, integer ids for table sources."""
    items = [t.strip() for t in text.split(",") if t.strip()]
    if isinstance(hom.source, FpGroup):
        return items
    try:
        return [int(t) for t in items]
    except ValueError as exc:
        raise MalformedInputError(
            f"table-group element sets must be integer ids: {text!r}"
        ) from exc
