"""Fixed-point statistics of finite permutation actions.

For a homomorphism ``h`` and finite element sets ``A``, ``B``:

* the action trace ``Tr(A)`` is the fraction of points fixed by every
  image of ``A``;
* the local statistic ``S(A, B)`` (Benjamini-Schramm statistic) is the
  fraction of points fixed by all of ``A`` and moved by all of ``B``.

Both determine each other by inclusion-exclusion:
``S(A,B) = sum over V subset of B of (-1)^|V| * Tr(A union V)`` and
``Tr(A) = S(A, {})``.

Elements are ids for ``FiniteGroup`` sources and words (strings or parsed
tuples) for ``FpGroup`` sources.  Words are compared syntactically; the
underlying group equality is never decided, which leaves every value
well-defined because only the evaluated permutations enter the counts.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Mapping

from .errors import BoundExceededError, PermStabError
from .groups import FiniteGroup, PermHomomorphism, evaluate_word, parse_word

DEFAULT_MOVED_SET_BOUND = 20

ElementSet = Iterable  # ids (int) or words (str | Word)


def _canonical_elements(h: PermHomomorphism, A: ElementSet) -> tuple:
    """Normalize an element set to a sorted, hashable tuple."""
    if isinstance(h.source, FiniteGroup):
        out = set()
        for a in A:
            a = int(a)
            if not 0 <= a < h.source.order:
                raise PermStabError(f"element id {a} outside the source group")
            out.add(a)
        return tuple(sorted(out))
    words = set()
    for w in A:
        if isinstance(w, str):
            w = parse_word(w, h.source.generators)
        else:
            w = tuple(w)
        words.add(w)
    return tuple(sorted(words))


class ActionTrace:
    """Memoized evaluator of ``Tr`` for one homomorphism.

    Values are exact rationals with denominator dividing the degree.  The
    memo table is keyed by the canonical sorted element set, so concurrent
    use at worst recomputes an identical entry.
    """

    def __init__(self, h: PermHomomorphism):
        self.hom = h
        self._full = (1 << h.degree) - 1
        self._mask_memo: dict = {}
        self._count_memo: dict[tuple, int] = {}

    def _mask_of(self, element) -> int:
        m = self._mask_memo.get(element)
        if m is None:
            if isinstance(self.hom.source, FiniteGroup):
                p = self.hom.images[element]
            else:
                p = evaluate_word(self.hom, element)
            m = p.fixed_mask()
            self._mask_memo[element] = m
        return m

    def fixed_count(self, A: ElementSet) -> int:
        """Number of points fixed by every image of ``A``."""
        key = _canonical_elements(self.hom, A)
        c = self._count_memo.get(key)
        if c is None:
            mask = self._full
            for el in key:
                mask &= self._mask_of(el)
            c = mask.bit_count()
            self._count_memo[key] = c
        return c

    def value(self, A: ElementSet) -> Fraction:
        if self.hom.degree == 0:
            return Fraction(1)
        return Fraction(self.fixed_count(A), self.hom.degree)

    def statistic_count(self, A: ElementSet, B: ElementSet) -> int:
        """Number of points fixed by all of ``A`` and moved by all of ``B``."""
        mask = self._full
        for el in _canonical_elements(self.hom, A):
            mask &= self._mask_of(el)
        for el in _canonical_elements(self.hom, B):
            mask &= self._full & ~self._mask_of(el)
        return mask.bit_count()


@lru_cache(maxsize=256)
def get_trace(h: PermHomomorphism) -> ActionTrace:
    return ActionTrace(h)


def action_trace(h: PermHomomorphism, A: ElementSet) -> Fraction:
    """Fraction of points fixed simultaneously by every image of ``A``."""
    return get_trace(h).value(A)


def bs_statistic(h: PermHomomorphism, A: ElementSet, B: ElementSet) -> Fraction:
    """Fraction of points fixed by all of ``A`` and moved by all of ``B``.

    Overlapping ``A`` and ``B`` force the value 0.
    """
    if h.degree == 0:
        return Fraction(1) if not tuple(B) else Fraction(0)
    return Fraction(get_trace(h).statistic_count(A, B), h.degree)


def s_from_tr(
    trace: ActionTrace,
    A: ElementSet,
    B: ElementSet,
    moved_bound: int = DEFAULT_MOVED_SET_BOUND,
) -> Fraction:
    """``S(A, B)`` from trace values alone, by inclusion-exclusion."""
    h = trace.hom
    A = _canonical_elements(h, A)
    B = _canonical_elements(h, B)
    if len(B) > moved_bound:
        raise BoundExceededError(
            f"moved set of size {len(B)} exceeds bound {moved_bound}"
        )
    if h.degree == 0:
        return Fraction(1) if not B else Fraction(0)
    total = 0
    for k in range(len(B) + 1):
        sign = -1 if k & 1 else 1
        for V in combinations(B, k):
            total += sign * trace.fixed_count(set(A) | set(V))
    return Fraction(total, h.degree)


def tr_from_s(
    stats: Mapping[frozenset, Fraction], universe: ElementSet
) -> dict[frozenset, Fraction]:
    """Recover ``Tr`` on all subsets of a finite set ``F`` from the full
    statistic table ``{T -> S(T, F minus T)}``.

    ``stats`` must contain an entry for every subset of ``universe``;
    then ``Tr(A) = sum over T containing A of S(T, F minus T)``.
    """
    F = frozenset(universe)
    subsets = []
    items = sorted(F, key=repr)
    for k in range(len(items) + 1):
        for T in combinations(items, k):
            T = frozenset(T)
            if T not in stats:
                raise PermStabError(
                    f"statistic table is incomplete: missing entry for {set(T)}"
                )
            subsets.append(T)
    out = {}
    for A in subsets:
        out[A] = sum(
            (stats[T] for T in subsets if A <= T), start=Fraction(0)
        )
    return out


def statistic_table(
    h: PermHomomorphism, universe: ElementSet
) -> dict[frozenset, Fraction]:
    """The full table ``{T -> S(T, F minus T)}`` over subsets of ``F``."""
    items = list(_canonical_elements(h, universe))
    table = {}
    for k in range(len(items) + 1):
        for T in combinations(items, k):
            rest = [x for x in items if x not in T]
            table[frozenset(T)] = bs_statistic(h, T, rest)
    return table
