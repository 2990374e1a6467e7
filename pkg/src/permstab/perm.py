"""Exact permutation arithmetic on ``{1..n}``.

Permutations are immutable, 1-indexed, and compose as functions acting on
the left: ``(p * q)(i) = p(q(i))``.  All metric quantities are exact
``fractions.Fraction`` values; no floating point is used anywhere.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Iterator

from .errors import DegreeMismatchError, PermutationParseError

_CYCLE_RE = re.compile(r"\(([^()]*)\)")
_SEP_RE = re.compile(r"[,\s]+")


class Permutation:
    """A bijection of ``{1..n}`` stored in one-line form.

    ``images[i-1]`` is the image of point ``i``.  Degree 0 (the empty
    bijection) is permitted.
    """

    __slots__ = ("images", "_hash")

    def __init__(self, images: Iterable[int]):
        images = tuple(images)
        n = len(images)
        if sorted(images) != list(range(1, n + 1)):
            raise PermutationParseError(
                f"images {images!r} are not a bijection of {{1..{n}}}"
            )
        object.__setattr__(self, "images", images)
        object.__setattr__(self, "_hash", hash(images))

    def __setattr__(self, name, value):
        raise AttributeError("Permutation is immutable")

    @property
    def degree(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(1, n + 1))

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        """Left-action composition: apply ``other`` first, then ``self``."""
        if self.degree != other.degree:
            raise DegreeMismatchError(
                f"cannot compose degrees {self.degree} and {other.degree}"
            )
        a, b = self.images, other.images
        return Permutation(a[b[i] - 1] for i in range(self.degree))

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for i, j in enumerate(self.images, 1):
            inv[j - 1] = i
        return Permutation(inv)

    def __pow__(self, k: int) -> "Permutation":
        if k < 0:
            return self.inverse() ** (-k)
        result = Permutation.identity(self.degree)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Permutation({list(self.images)!r})"

    def is_identity(self) -> bool:
        return all(j == i + 1 for i, j in enumerate(self.images))

    def order(self) -> int:
        from math import lcm

        return lcm(1, *(len(c) for c in self.cycles()))

    def fixed_points(self) -> tuple[int, ...]:
        return tuple(i for i, j in enumerate(self.images, 1) if i == j)

    def fixed_mask(self) -> int:
        """Bitmask with bit ``i-1`` set iff point ``i`` is fixed."""
        mask = 0
        for i, j in enumerate(self.images, 1):
            if i == j:
                mask |= 1 << (i - 1)
        return mask

    def support(self) -> tuple[int, ...]:
        return tuple(i for i, j in enumerate(self.images, 1) if i != j)

    def cycles(self, include_fixed: bool = False) -> list[tuple[int, ...]]:
        """Disjoint cycles, each starting at its least point, sorted by it."""
        seen = [False] * self.degree
        out = []
        for start in range(1, self.degree + 1):
            if seen[start - 1]:
                continue
            cyc = [start]
            seen[start - 1] = True
            j = self(start)
            while j != start:
                seen[j - 1] = True
                cyc.append(j)
                j = self(j)
            if len(cyc) > 1 or include_fixed:
                out.append(tuple(cyc))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        """Multiset of cycle lengths (fixed points included), ascending."""
        return tuple(sorted(len(c) for c in self.cycles(include_fixed=True)))

    def one_line_str(self) -> str:
        return "[" + ",".join(map(str, self.images)) + "]"

    def cycle_str(self) -> str:
        cycs = self.cycles()
        if not cycs:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cycs)


def parse_permutation(text: str, degree: int) -> Permutation:
    """Parse one-line ``[2,1,3]`` or cycle ``(1 2)(3 4)`` notation.

    The degree is explicit; points mentioned must lie in ``{1..degree}``
    and points absent from cycle notation are fixed.
    """
    if degree < 0:
        raise PermutationParseError("degree must be nonnegative")
    text = text.strip()
    if text.startswith("["):
        if not text.endswith("]"):
            raise PermutationParseError(f"unterminated one-line form: {text!r}")
        body = text[1:-1].strip()
        entries = [t for t in _SEP_RE.split(body) if t] if body else []
        try:
            images = [int(t) for t in entries]
        except ValueError:
            raise PermutationParseError(f"non-integer entry in {text!r}") from None
        if len(images) != degree:
            raise PermutationParseError(
                f"one-line form lists {len(images)} images, degree is {degree}"
            )
        return Permutation(images)
    if text == "" or text == "()":
        return Permutation.identity(degree)
    consumed = _CYCLE_RE.sub("", text).strip()
    if consumed:
        raise PermutationParseError(f"unparsable permutation text: {text!r}")
    images = list(range(1, degree + 1))
    touched: set[int] = set()
    for match in _CYCLE_RE.finditer(text):
        body = match.group(1).strip()
        if not body:
            continue
        try:
            pts = [int(t) for t in _SEP_RE.split(body)]
        except ValueError:
            raise PermutationParseError(f"non-integer point in {text!r}") from None
        for p in pts:
            if not 1 <= p <= degree:
                raise PermutationParseError(f"point {p} out of range 1..{degree}")
            if p in touched:
                raise PermutationParseError(f"point {p} appears in two cycles")
            touched.add(p)
        for a, b in zip(pts, pts[1:] + pts[:1]):
            images[a - 1] = b
    return Permutation(images)


def hamming_distance(p: Permutation, q: Permutation) -> Fraction:
    """Fraction of points where ``p`` and ``q`` disagree (bi-invariant)."""
    if p.degree != q.degree:
        raise DegreeMismatchError(
            f"degrees differ: {p.degree} vs {q.degree}"
        )
    if p.degree == 0:
        return Fraction(0)
    diff = sum(1 for a, b in zip(p.images, q.images) if a != b)
    return Fraction(diff, p.degree)


def normalized_trace(p: Permutation) -> Fraction:
    """Fraction of fixed points; equals ``1 - hamming_distance(p, id)``.

    The degree-0 permutation has trace 1 by convention (empty action).
    """
    if p.degree == 0:
        return Fraction(1)
    return Fraction(len(p.fixed_points()), p.degree)


def direct_sum(p: Permutation, q: Permutation) -> Permutation:
    """Act as ``p`` on the first block and as ``q`` shifted on the second."""
    n = p.degree
    return Permutation(p.images + tuple(x + n for x in q.images))


def replicate(p: Permutation, s: int) -> Permutation:
    """``s``-fold direct sum of ``p`` with itself; trace is preserved."""
    if s < 1:
        raise PermutationParseError(f"replication count must be >= 1, got {s}")
    n = p.degree
    images = []
    for block in range(s):
        shift = block * n
        images.extend(x + shift for x in p.images)
    return Permutation(images)


def restrict(p: Permutation, points: Iterable[int]) -> Permutation:
    """Restriction of ``p`` to an invariant point set, renumbered 1..k.

    ``points`` must be invariant under ``p``; order is the ascending order
    of the original labels.
    """
    pts = sorted(points)
    index = {x: i + 1 for i, x in enumerate(pts)}
    try:
        return Permutation(index[p(x)] for x in pts)
    except KeyError as exc:
        raise DegreeMismatchError(
            f"point set {pts} is not invariant under {p!r}"
        ) from exc


def all_permutations(n: int) -> Iterator[Permutation]:
    """All elements of the symmetric group on ``{1..n}``, lexicographically."""
    from itertools import permutations as _perms

    for images in _perms(range(1, n + 1)):
        yield Permutation(images)
