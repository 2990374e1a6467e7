"""Finite groups by multiplication table, finitely presented groups by
word evaluation, and verified homomorphisms into symmetric groups.

Finite groups store their full multiplication table with elements named
``0..order-1``; this keeps every operation unambiguous at desk scale.
Finitely presented groups support only word evaluation and relator
checking (no word problem, no coset enumeration).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Sequence, Union

from .errors import (
    BoundExceededError,
    GroupTableError,
    NotSubgroupError,
    SourceMismatchError,
    WordError,
)
from .perm import Permutation

DEFAULT_CLOSURE_BOUND = 100_000
DEFAULT_SUBGROUP_ORDER_BOUND = 200


class FiniteGroup:
    """A finite group given by its multiplication table.

    ``table[a][b]`` is the product ``a * b``.  The identity and inverse
    table are derived and the group axioms are verified on construction.
    """

    __slots__ = ("order", "table", "identity", "inverses", "_hash")

    def __init__(self, table: Sequence[Sequence[int]]):
        n = len(table)
        rows = tuple(tuple(row) for row in table)
        if any(len(row) != n for row in rows):
            raise GroupTableError("multiplication table must be square")
        elems = set(range(n))
        for row in rows:
            if set(row) != elems:
                raise GroupTableError("each table row must be a bijection")
        for j in range(n):
            if {rows[i][j] for i in range(n)} != elems:
                raise GroupTableError("each table column must be a bijection")
        identity = None
        for e in range(n):
            if all(rows[e][x] == x and rows[x][e] == x for x in range(n)):
                identity = e
                break
        if identity is None:
            raise GroupTableError("table has no identity element")
        for a in range(n):
            for b in range(n):
                ab = rows[a][b]
                for c in range(n):
                    if rows[ab][c] != rows[a][rows[b][c]]:
                        raise GroupTableError(
                            f"associativity fails at ({a},{b},{c})"
                        )
        inverses = [None] * n
        for a in range(n):
            for b in range(n):
                if rows[a][b] == identity and rows[b][a] == identity:
                    inverses[a] = b
                    break
            if inverses[a] is None:
                raise GroupTableError(f"element {a} has no inverse")
        object.__setattr__(self, "order", n)
        object.__setattr__(self, "table", rows)
        object.__setattr__(self, "identity", identity)
        object.__setattr__(self, "inverses", tuple(inverses))
        object.__setattr__(self, "_hash", hash(rows))

    def __setattr__(self, name, value):
        raise AttributeError("FiniteGroup is immutable")

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def conjugate(self, g: int, x: int) -> int:
        """``g * x * g^-1``."""
        return self.table[self.table[g][x]][self.inverses[g]]

    def elements(self) -> range:
        return range(self.order)

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.table[x][a]
            k += 1
        return k

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteGroup) and self.table == other.table

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"FiniteGroup(order={self.order})"


@dataclass(frozen=True)
class Subgroup:
    """A subgroup of ``parent`` as a sorted tuple of element ids."""

    parent: FiniteGroup
    members: tuple[int, ...]

    def __init__(self, parent: FiniteGroup, members: Iterable[int]):
        mems = tuple(sorted(set(members)))
        object.__setattr__(self, "parent", parent)
        object.__setattr__(self, "members", mems)
        mset = set(mems)
        if parent.identity not in mset:
            raise NotSubgroupError("member set lacks the identity")
        for a in mems:
            if not 0 <= a < parent.order:
                raise NotSubgroupError(f"element id {a} out of range")
            if parent.inv(a) not in mset:
                raise NotSubgroupError(f"member set not closed under inverse ({a})")
            for b in mems:
                if parent.mul(a, b) not in mset:
                    raise NotSubgroupError(
                        f"member set not closed under product ({a},{b})"
                    )

    @property
    def order(self) -> int:
        return len(self.members)

    @property
    def index(self) -> int:
        return self.parent.order // len(self.members)

    def member_set(self) -> frozenset[int]:
        return frozenset(self.members)

    def as_group(self) -> tuple[FiniteGroup, tuple[int, ...]]:
        """The abstract group of this subgroup plus the embedding.

        Returns ``(H, emb)`` where ``emb[i]`` is the parent id of the
        i-th member (members in ascending order).
        """
        emb = self.members
        pos = {g: i for i, g in enumerate(emb)}
        table = [
            [pos[self.parent.mul(a, b)] for b in emb] for a in emb
        ]
        return FiniteGroup(table), emb


def subgroup_closure(G: FiniteGroup, seed: Iterable[int]) -> Subgroup:
    """Subgroup generated by ``seed``, by breadth-first products."""
    members = {G.identity}
    frontier = [G.identity]
    gens = sorted(set(seed) | {G.identity})
    for g in gens:
        if g not in members:
            members.add(g)
            frontier.append(g)
    while frontier:
        new = []
        for a in frontier:
            for g in gens:
                x = G.mul(a, g)
                if x not in members:
                    members.add(x)
                    new.append(x)
                y = G.mul(g, a)
                if y not in members:
                    members.add(y)
                    new.append(y)
        frontier = new
    return Subgroup(G, members)


def trivial_subgroup(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, [G.identity])


def full_subgroup(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, range(G.order))


# ---------------------------------------------------------------------------
# constructors


def cyclic_group(n: int) -> FiniteGroup:
    return FiniteGroup([[(i + j) % n for j in range(n)] for i in range(n)])


def direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    """Elements packed as ``a * |H| + b``."""
    m = H.order
    table = []
    for a1 in range(G.order):
        for b1 in range(H.order):
            row = []
            for a2 in range(G.order):
                for b2 in range(H.order):
                    row.append(G.mul(a1, a2) * m + H.mul(b1, b2))
            table.append(row)
    return FiniteGroup(table)


def klein_four_group() -> FiniteGroup:
    return direct_product(cyclic_group(2), cyclic_group(2))


def group_from_permutations(
    gens: Sequence[Permutation], max_order: int = DEFAULT_CLOSURE_BOUND
) -> tuple[FiniteGroup, "PermHomomorphism"]:
    """Close ``gens`` under composition and return the abstract table
    together with the defining (faithful) permutation homomorphism.

    Element ids follow the lexicographic order of one-line images, which
    places the identity at id 0.
    """
    if not gens:
        raise GroupTableError("need at least one generator")
    degree = gens[0].degree
    if any(g.degree != degree for g in gens):
        raise GroupTableError("generators must share a degree")
    ident = Permutation.identity(degree)
    elems = {ident}
    frontier = [ident]
    while frontier:
        new = []
        for p in frontier:
            for g in gens:
                q = g * p
                if q not in elems:
                    if len(elems) >= max_order:
                        raise BoundExceededError(
                            f"group order exceeds bound {max_order}"
                        )
                    elems.add(q)
                    new.append(q)
        frontier = new
    ordered = sorted(elems, key=lambda p: p.images)
    pos = {p: i for i, p in enumerate(ordered)}
    table = [[pos[a * b] for b in ordered] for a in ordered]
    G = FiniteGroup(table)
    hom = PermHomomorphism(G, degree, tuple(ordered))
    return G, hom


def symmetric_group(n: int) -> tuple[FiniteGroup, "PermHomomorphism"]:
    if n <= 1:
        return group_from_permutations([Permutation.identity(max(n, 1))])
    gens = [
        Permutation([2, 1] + list(range(3, n + 1))),
        Permutation(list(range(2, n + 1)) + [1]),
    ]
    return group_from_permutations(gens)


def dihedral_group(n: int) -> tuple[FiniteGroup, "PermHomomorphism"]:
    """Symmetries of the regular n-gon, acting on its vertices."""
    rot = Permutation(list(range(2, n + 1)) + [1])
    refl = Permutation([1] + list(range(n, 1, -1)))
    return group_from_permutations([rot, refl])


def quaternion_group() -> tuple[FiniteGroup, "PermHomomorphism"]:
    """Order-8 quaternion group in its regular representation."""
    a = Permutation([2, 3, 4, 1, 6, 7, 8, 5])  # (1 2 3 4)(5 6 7 8)
    b = Permutation([5, 8, 7, 6, 3, 2, 1, 4])  # (1 5 3 7)(2 8 4 6)
    return group_from_permutations([a, b])


# ---------------------------------------------------------------------------
# subgroup machinery


@lru_cache(maxsize=None)
def _all_subgroup_sets(G: FiniteGroup) -> tuple[frozenset[int], ...]:
    cyclic = {frozenset(subgroup_closure(G, [g]).members) for g in G.elements()}
    known: set[frozenset[int]] = set(cyclic)
    frontier = list(cyclic)
    while frontier:
        new = []
        for S in frontier:
            for C in cyclic:
                if C <= S:
                    continue
                T = frozenset(subgroup_closure(G, S | C).members)
                if T not in known:
                    known.add(T)
                    new.append(T)
        frontier = new
    return tuple(sorted(known, key=lambda s: (len(s), sorted(s))))


def all_subgroups(
    G: FiniteGroup, order_bound: int = DEFAULT_SUBGROUP_ORDER_BOUND
) -> list[Subgroup]:
    """Complete duplicate-free subgroup list, seeded from cyclic subgroups
    and closed under joins (every subgroup is a join of cyclic ones)."""
    if G.order > order_bound:
        raise BoundExceededError(
            f"group order {G.order} exceeds subgroup-enumeration bound {order_bound}"
        )
    return [Subgroup(G, s) for s in _all_subgroup_sets(G)]


@dataclass(frozen=True)
class SubgroupClasses:
    """Conjugacy classes of subgroups of a finite group.

    ``classes[i]`` is the sorted tuple of member-sets in class ``i``; the
    canonical representative is the lexicographically least member set.
    """

    group: FiniteGroup
    classes: tuple[tuple[frozenset[int], ...], ...]
    class_of: Mapping[frozenset[int], int] = field(hash=False, compare=False)

    def representative(self, class_id: int) -> Subgroup:
        return Subgroup(self.group, min(self.classes[class_id], key=sorted))

    def class_id(self, members: Iterable[int]) -> int:
        return self.class_of[frozenset(members)]

    def __len__(self) -> int:
        return len(self.classes)


@lru_cache(maxsize=None)
def subgroup_conjugacy_classes(G: FiniteGroup) -> SubgroupClasses:
    """Partition of ``all_subgroups(G)`` under conjugation by ``G``."""
    sets = _all_subgroup_sets(G)
    remaining = set(sets)
    classes = []
    for S in sets:  # ascending canonical order, so reps are least-first
        if S not in remaining:
            continue
        orbit = {frozenset(G.conjugate(g, x) for x in S) for g in G.elements()}
        remaining -= orbit
        classes.append(tuple(sorted(orbit, key=sorted)))
    classes.sort(key=lambda c: (len(min(c, key=sorted)), sorted(min(c, key=sorted))))
    class_of = {}
    for i, orbit in enumerate(classes):
        for S in orbit:
            class_of[S] = i
    return SubgroupClasses(G, tuple(classes), class_of)


def normalizer(G: FiniteGroup, N: Subgroup) -> Subgroup:
    """Largest subgroup of ``G`` conjugating ``N`` onto itself."""
    if N.parent != G:
        raise NotSubgroupError("subgroup belongs to a different group")
    mem = N.member_set()
    members = [
        g
        for g in G.elements()
        if all(G.conjugate(g, x) in mem for x in N.members)
    ]
    return Subgroup(G, members)


def coset_action(G: FiniteGroup, N: Subgroup) -> "PermHomomorphism":
    """Action of ``G`` on the left cosets of ``N``, as a degree-[G:N]
    homomorphism.  Cosets are numbered by ascending least member, and the
    stabilizer of the point carrying the coset ``N`` is exactly ``N``."""
    if N.parent != G:
        raise NotSubgroupError("subgroup belongs to a different group")
    mem = N.members
    coset_of = {}
    cosets = []
    for g in G.elements():
        if g in coset_of:
            continue
        coset = frozenset(G.mul(g, h) for h in mem)
        cosets.append(coset)
        for x in coset:
            coset_of[x] = coset
    cosets.sort(key=min)
    index = {c: i + 1 for i, c in enumerate(cosets)}
    reps = [min(c) for c in cosets]
    images = []
    for g in G.elements():
        images.append(
            Permutation(index[coset_of[G.mul(g, r)]] for r in reps)
        )
    return PermHomomorphism(G, len(cosets), tuple(images))


# ---------------------------------------------------------------------------
# presentations and words


Word = tuple[tuple[int, int], ...]  # (generator index, exponent != 0)

_LETTER_RE = re.compile(r"^([A-Za-z_][A-Za-z_0-9]*)(?:\^(-?\d+))?$")


@dataclass(frozen=True)
class FpGroup:
    """A finitely presented group: generator names plus relator words.

    Only word evaluation and relator checking are supported.
    """

    generators: tuple[str, ...]
    relators: tuple[Word, ...]

    def __init__(self, generators: Sequence[str], relators: Iterable[Union[str, Word]] = ()):
        gens = tuple(generators)
        if len(set(gens)) != len(gens):
            raise WordError("duplicate generator names")
        object.__setattr__(self, "generators", gens)
        parsed = tuple(
            parse_word(r, gens) if isinstance(r, str) else tuple(r)
            for r in relators
        )
        for w in parsed:
            for idx, exp in w:
                if not 0 <= idx < len(gens):
                    raise WordError(f"relator references unknown generator {idx}")
                if exp == 0:
                    raise WordError("zero exponent in relator")
        object.__setattr__(self, "relators", parsed)

    @property
    def is_free(self) -> bool:
        return not self.relators


def parse_word(text: str, generators: Sequence[str]) -> Word:
    """Parse space-separated ``name^exp`` syntax (bare name means exp 1)."""
    pos = {name: i for i, name in enumerate(generators)}
    out = []
    for token in text.split():
        m = _LETTER_RE.match(token)
        if not m:
            raise WordError(f"invalid word token {token!r}")
        name, exp = m.group(1), m.group(2)
        if name not in pos:
            raise WordError(f"unknown generator {name!r}")
        e = int(exp) if exp is not None else 1
        if e != 0:
            out.append((pos[name], e))
    return tuple(out)


def format_word(word: Word, generators: Sequence[str]) -> str:
    parts = []
    for idx, exp in word:
        parts.append(generators[idx] if exp == 1 else f"{generators[idx]}^{exp}")
    return " ".join(parts)


# ---------------------------------------------------------------------------
# homomorphisms


@dataclass(frozen=True)
class PermHomomorphism:
    """A homomorphism into the symmetric group of a fixed degree.

    For a ``FiniteGroup`` source, ``images`` maps every element id to a
    permutation; for an ``FpGroup`` source, it maps each generator (by
    position).  Construction checks shapes only; use
    :func:`check_homomorphism` for the algebraic verification.
    """

    source: Union[FiniteGroup, FpGroup]
    degree: int
    images: tuple[Permutation, ...]

    def __post_init__(self):
        if isinstance(self.source, FiniteGroup):
            expected = self.source.order
        else:
            expected = len(self.source.generators)
        if len(self.images) != expected:
            raise SourceMismatchError(
                f"expected {expected} images, got {len(self.images)}"
            )
        for p in self.images:
            if p.degree != self.degree:
                raise SourceMismatchError(
                    f"image degree {p.degree} differs from {self.degree}"
                )

    def image(self, element: int) -> Permutation:
        """Image of a ``FiniteGroup`` element id."""
        return self.images[element]

    def image_of_word(self, word: Union[str, Word]) -> Permutation:
        return evaluate_word(self, word)

    def generator_image(self, name: str) -> Permutation:
        if not isinstance(self.source, FpGroup):
            raise SourceMismatchError("generator images require an FpGroup source")
        return self.images[self.source.generators.index(name)]


def same_source(h1: PermHomomorphism, h2: PermHomomorphism) -> bool:
    return h1.source == h2.source


def evaluate_word(h: PermHomomorphism, word: Union[str, Word]) -> Permutation:
    """Product of generator images per the word's signed exponents."""
    if isinstance(word, str):
        if not isinstance(h.source, FpGroup):
            raise WordError("string words require an FpGroup source")
        word = parse_word(word, h.source.generators)
    result = Permutation.identity(h.degree)
    for idx, exp in word:
        if not 0 <= idx < len(h.images):
            raise WordError(f"word references unknown generator index {idx}")
        result = result * (h.images[idx] ** exp)
    return result


@dataclass(frozen=True)
class HomCheck:
    ok: bool
    witness: object = None  # violating (a, b) pair or relator word
    message: str = ""


def check_homomorphism(h: PermHomomorphism) -> HomCheck:
    """Verify the homomorphism property exhaustively.

    FiniteGroup source: ``image(a*b) == image(a) * image(b)`` for all
    pairs.  FpGroup source: every relator evaluates to the identity.
    """
    if isinstance(h.source, FiniteGroup):
        G = h.source
        for a in G.elements():
            pa = h.images[a]
            for b in G.elements():
                if h.images[G.mul(a, b)] != pa * h.images[b]:
                    return HomCheck(
                        False,
                        witness=(a, b),
                        message=f"image({a}*{b}) != image({a})*image({b})",
                    )
        return HomCheck(True)
    for rel in h.source.relators:
        if not evaluate_word(h, rel).is_identity():
            return HomCheck(
                False,
                witness=rel,
                message=f"relator {format_word(rel, h.source.generators)} "
                "does not evaluate to the identity",
            )
    return HomCheck(True)


def hom_from_element_map(
    G: FiniteGroup, degree: int, images: Mapping[int, Permutation]
) -> PermHomomorphism:
    if set(images) != set(G.elements()):
        raise SourceMismatchError("element map must cover every element id")
    return PermHomomorphism(G, degree, tuple(images[g] for g in G.elements()))


def hom_from_generator_images(
    G: FiniteGroup,
    hom_gens: Mapping[int, Permutation],
    degree: int,
) -> PermHomomorphism:
    """Extend images of a generating set of ``G`` to all elements.

    Raises ``SourceMismatchError`` if the assignment is inconsistent or the
    given elements do not generate ``G``.
    """
    known: dict[int, Permutation] = {G.identity: Permutation.identity(degree)}
    for g, p in hom_gens.items():
        if p.degree != degree:
            raise SourceMismatchError("generator image degree mismatch")
        if g in known and known[g] != p:
            raise SourceMismatchError(f"conflicting images for element {g}")
        known[g] = p
    frontier = list(known)
    while frontier:
        new = []
        for a in frontier:
            for g, p in list(hom_gens.items()):
                x = G.mul(a, g)
                q = known[a] * p
                if x not in known:
                    known[x] = q
                    new.append(x)
                elif known[x] != q:
                    raise SourceMismatchError(
                        f"generator images are inconsistent at element {x}"
                    )
        frontier = new
    if len(known) != G.order:
        raise SourceMismatchError("given elements do not generate the group")
    h = hom_from_element_map(G, degree, known)
    chk = check_homomorphism(h)
    if not chk.ok:
        raise SourceMismatchError(f"not a homomorphism: {chk.message}")
    return h


def restrict_hom(h: PermHomomorphism, H: Subgroup) -> PermHomomorphism:
    """Restriction of ``h`` to a subgroup, as a homomorphism of the
    subgroup's abstract group (members in ascending order)."""
    if not isinstance(h.source, FiniteGroup):
        raise SourceMismatchError("restriction requires a FiniteGroup source")
    if H.parent != h.source:
        raise NotSubgroupError("subgroup belongs to a different group")
    Habs, emb = H.as_group()
    return PermHomomorphism(Habs, h.degree, tuple(h.images[g] for g in emb))


def direct_sum_hom(
    h1: PermHomomorphism, h2: PermHomomorphism
) -> PermHomomorphism:
    """Pointwise block sum of two homomorphisms of the same source."""
    from .perm import direct_sum

    if h1.source != h2.source:
        raise SourceMismatchError("direct sum requires a common source")
    images = tuple(direct_sum(a, b) for a, b in zip(h1.images, h2.images))
    return PermHomomorphism(h1.source, h1.degree + h2.degree, images)


def trivial_hom(G: Union[FiniteGroup, FpGroup], degree: int) -> PermHomomorphism:
    """Every element acts as the identity on ``degree`` points."""
    ident = Permutation.identity(degree)
    count = G.order if isinstance(G, FiniteGroup) else len(G.generators)
    return PermHomomorphism(G, degree, tuple(ident for _ in range(count)))


def conjugate_hom(h: PermHomomorphism, p: Permutation) -> PermHomomorphism:
    """The homomorphism ``g -> p * h(g) * p^-1``."""
    pinv = p.inverse()
    return PermHomomorphism(
        h.source, h.degree, tuple(p * img * pinv for img in h.images)
    )
