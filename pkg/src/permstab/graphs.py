"""Action graphs, rooted-pattern frequencies, truncated statistical
distance, and the encoding of labeled digraphs into simple graphs.

An action graph of a homomorphism of a free group has one labeled edge
``v -> image(x)(v)`` per generator ``x`` and vertex ``v``, so each label
is the graph of a permutation.  The frequency of a rooted pattern is the
fraction of vertices admitting an injective, label- and orientation-
preserving embedding of the pattern that sends the root there
(non-induced).  The truncated statistical distance is a weighted l1
distance between the frequency vectors over a canonical enumeration of
small connected rooted patterns.

Pattern family.  Only patterns whose vertices have at most one outgoing
and one incoming edge per label are enumerated: any other pattern embeds
in no per-label-permutation graph (two same-label out-edges would force
two equal images), so it would contribute 0 to every distance.

Weights.  Patterns are ordered by (vertex count, canonical certificate).
Patterns equivalent under a relabeling of the alphabet form an orbit;
the j-th orbit in this order carries weight 2^-j and every pattern of
the orbit inherits it.  Sharing the weight across an orbit is what makes
the distance invariant under a consistent relabeling of both graphs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations as iperms
from typing import Iterable, Optional, Sequence

from .errors import (
    AlphabetMismatchError,
    BoundExceededError,
    MalformedInputError,
    RelatorsPresentError,
)
from .groups import FpGroup, PermHomomorphism
from .perm import Permutation
from .trace_stats import bs_statistic

DEFAULT_PATTERN_VERTEX_BOUND = 6
DEFAULT_ALPHABET_BOUND = 8


@dataclass(frozen=True)
class LabeledDigraph:
    """Oriented labeled graph where each label is a permutation graph."""

    n: int
    alphabet: tuple[str, ...]
    perms: tuple[Permutation, ...]

    def __post_init__(self):
        if len(self.alphabet) != len(self.perms):
            raise MalformedInputError("one permutation per label required")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise MalformedInputError("duplicate labels")
        for p in self.perms:
            if p.degree != self.n:
                raise MalformedInputError("label permutation degree mismatch")

    @classmethod
    def from_edges(
        cls,
        n: int,
        alphabet: Sequence[str],
        edges: Iterable[tuple[int, int, str]],
    ) -> "LabeledDigraph":
        by_label: dict[str, dict[int, int]] = {a: {} for a in alphabet}
        for u, v, lab in edges:
            if lab not in by_label:
                raise MalformedInputError(f"unknown label {lab!r}")
            if u in by_label[lab]:
                raise MalformedInputError(
                    f"two {lab!r}-edges leave vertex {u}"
                )
            by_label[lab][u] = v
        perms = []
        for a in alphabet:
            mapping = by_label[a]
            if sorted(mapping) != list(range(1, n + 1)):
                raise MalformedInputError(
                    f"label {a!r} is not the graph of a permutation"
                )
            perms.append(Permutation(mapping[i] for i in range(1, n + 1)))
        return cls(n, tuple(alphabet), tuple(perms))

    def edges(self) -> list[tuple[int, int, str]]:
        out = []
        for lab, p in zip(self.alphabet, self.perms):
            out.extend((v, p(v), lab) for v in range(1, self.n + 1))
        return out

    def max_total_degree(self) -> int:
        if self.n == 0:
            return 0
        deg = [0] * self.n
        for u, v, _ in self.edges():
            if u == v:
                deg[u - 1] += 2
            else:
                deg[u - 1] += 1
                deg[v - 1] += 1
        return max(deg)


def action_graph(psi: PermHomomorphism) -> LabeledDigraph:
    """The labeled digraph of a homomorphism of a free group."""
    if not isinstance(psi.source, FpGroup):
        raise RelatorsPresentError("action graphs require an FpGroup source")
    if not psi.source.is_free:
        raise RelatorsPresentError(
            "action graphs are defined for free presentations only"
        )
    return LabeledDigraph(psi.degree, psi.source.generators, psi.images)


# ---------------------------------------------------------------------------
# rooted patterns


@dataclass(frozen=True)
class RootedPattern:
    """A small connected rooted labeled digraph (pattern to count).

    Vertices are ``1..n`` with root ``root``; edges are
    ``(u, v, label_index)`` triples with at most one outgoing and one
    incoming edge per label at each vertex.
    """

    n: int
    root: int
    alphabet: tuple[str, ...]
    edges: frozenset[tuple[int, int, int]]
    max_vertices: int = DEFAULT_PATTERN_VERTEX_BOUND

    def __post_init__(self):
        if not 1 <= self.root <= self.n:
            raise MalformedInputError("root outside vertex range")
        if self.n > self.max_vertices:
            raise BoundExceededError(
                f"pattern has {self.n} vertices, bound is {self.max_vertices}"
            )
        out_seen = set()
        in_seen = set()
        for u, v, lab in self.edges:
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise MalformedInputError("edge endpoint outside vertex range")
            if not 0 <= lab < len(self.alphabet):
                raise MalformedInputError("edge label index out of range")
            if (u, lab) in out_seen or (v, lab) in in_seen:
                raise MalformedInputError(
                    "more than one edge per label and direction at a vertex"
                )
            out_seen.add((u, lab))
            in_seen.add((v, lab))
        if not self._connected():
            raise MalformedInputError("pattern must be connected")

    def _connected(self) -> bool:
        if self.n == 1:
            return True
        adj: dict[int, set[int]] = {v: set() for v in range(1, self.n + 1)}
        for u, v, _ in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        seen = {self.root}
        stack = [self.root]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == self.n

    def certificate(self) -> tuple:
        """Canonical form under root-preserving isomorphism."""
        return _certificate(self.n, self.root, self.edges)

    def relabeled(self, sigma: Sequence[int]) -> "RootedPattern":
        """Pattern with label index ``i`` replaced by ``sigma[i]``."""
        return RootedPattern(
            self.n,
            self.root,
            self.alphabet,
            frozenset((u, v, sigma[lab]) for u, v, lab in self.edges),
            self.max_vertices,
        )


def _refine_colors(
    n: int, root: int, edges: frozenset[tuple[int, int, int]]
) -> dict[int, tuple]:
    colors = {
        v: ((0,) if v == root else (1,)) for v in range(1, n + 1)
    }
    for _ in range(3):
        new = {}
        for v in range(1, n + 1):
            outs = sorted((lab, colors[w]) for u, w, lab in edges if u == v)
            ins = sorted((lab, colors[u]) for u, w, lab in edges if w == v)
            new[v] = (colors[v], tuple(outs), tuple(ins))
        # compress to small sortable keys
        ranks = {c: i for i, c in enumerate(sorted(set(new.values()), key=repr))}
        colors = {v: (ranks[new[v]],) for v in new}
    return colors


def _certificate(
    n: int, root: int, edges: frozenset[tuple[int, int, int]]
) -> tuple:
    """Least edge tuple over root-preserving relabelings.

    Color refinement first partitions the vertices by an isomorphism-
    invariant key; only color-preserving bijections are then tried, which
    keeps the search tiny for patterns of at most 6 vertices.
    """
    from itertools import product as iproduct

    colors = _refine_colors(n, root, edges)
    by_color: dict[tuple, list[int]] = {}
    for v in range(1, n + 1):
        by_color.setdefault(colors[v], []).append(v)
    classes = [
        sorted(vs)
        for _, vs in sorted(by_color.items(), key=lambda kv: repr(kv[0]))
    ]
    class_targets = []
    pos = 1
    for vs in classes:
        class_targets.append(range(pos, pos + len(vs)))
        pos += len(vs)
    best: Optional[tuple] = None
    for combo in iproduct(*(iperms(vs) for vs in classes)):
        mapping = {}
        for vs_perm, targets in zip(combo, class_targets):
            for v, t in zip(vs_perm, targets):
                mapping[v] = t
        cert_edges = tuple(
            sorted((mapping[u], mapping[v], lab) for u, v, lab in edges)
        )
        key = (n, mapping[root], cert_edges)
        if best is None or key < best:
            best = key
    assert best is not None
    return best


def pattern_frequency(
    graph: LabeledDigraph,
    pattern: RootedPattern,
    vertex_bound: int = DEFAULT_PATTERN_VERTEX_BOUND,
) -> Fraction:
    """Fraction of vertices at which the pattern embeds rooted.

    Embeddings are injective and label/orientation preserving but not
    induced.  Because each label of the host graph is a permutation, the
    image of every pattern vertex is forced once the root is placed, so
    the test per root is linear in the pattern size.
    """
    if pattern.alphabet != graph.alphabet:
        raise AlphabetMismatchError(
            f"pattern alphabet {pattern.alphabet} differs from "
            f"graph alphabet {graph.alphabet}"
        )
    if pattern.n > vertex_bound:
        raise BoundExceededError(
            f"pattern has {pattern.n} vertices, bound is {vertex_bound}"
        )
    if graph.n == 0:
        return Fraction(0)
    perms = graph.perms
    inv = [p.inverse() for p in perms]
    edges = tuple(pattern.edges)
    count = 0
    for x in range(1, graph.n + 1):
        f: dict[int, int] = {pattern.root: x}
        pending = list(edges)
        ok = True
        while pending and ok:
            rest = []
            progressed = False
            for u, v, lab in pending:
                fu, fv = f.get(u), f.get(v)
                if fu is None and fv is None:
                    rest.append((u, v, lab))
                    continue
                progressed = True
                if fu is not None and fv is None:
                    f[v] = perms[lab](fu)
                elif fv is not None and fu is None:
                    f[u] = inv[lab](fv)
                elif perms[lab](fu) != fv:
                    ok = False
                    break
            pending = rest
            if not progressed and pending:  # pragma: no cover - connected
                ok = False
        if ok and len(set(f.values())) == pattern.n:
            count += 1
    return Fraction(count, graph.n)


# ---------------------------------------------------------------------------
# canonical pattern enumeration and the statistical distance


@lru_cache(maxsize=32)
def enumerate_patterns(
    alphabet: tuple[str, ...], size_bound: int
) -> tuple[tuple[RootedPattern, Fraction], ...]:
    """All connected rooted patterns with at most ``size_bound`` vertices,
    in canonical order, each paired with its weight.

    Order: vertex count, then certificate.  The j-th label-relabeling
    orbit (1-based, ordered by first appearance) has weight ``2^-j``.
    """
    if size_bound < 1:
        return ()
    if size_bound > DEFAULT_PATTERN_VERTEX_BOUND:
        raise BoundExceededError(
            f"size bound {size_bound} exceeds {DEFAULT_PATTERN_VERTEX_BOUND}"
        )
    m = len(alphabet)
    seed = RootedPattern(1, 1, alphabet, frozenset())
    seen = {seed.certificate(): seed}
    frontier = [seed]
    while frontier:
        new = []
        for pat in frontier:
            for succ in _pattern_successors(pat, size_bound):
                cert = succ.certificate()
                if cert not in seen:
                    seen[cert] = succ
                    new.append(succ)
        frontier = new
    ordered = [seen[c] for c in sorted(seen, key=lambda c: (c[0], c))]
    orbit_index: dict[tuple, int] = {}
    weights = []
    next_orbit = 0
    sigma_list = list(iperms(range(m)))
    for pat in ordered:
        key = min(pat.relabeled(sigma).certificate() for sigma in sigma_list)
        if key not in orbit_index:
            next_orbit += 1
            orbit_index[key] = next_orbit
        weights.append(Fraction(1, 2 ** orbit_index[key]))
    return tuple(zip(ordered, weights))


def _pattern_successors(
    pat: RootedPattern, size_bound: int
) -> Iterable[RootedPattern]:
    m = len(pat.alphabet)
    out_used = {(u, lab) for u, _, lab in pat.edges}
    in_used = {(v, lab) for _, v, lab in pat.edges}
    for lab in range(m):
        for u in range(1, pat.n + 1):
            if (u, lab) in out_used:
                continue
            for v in range(1, pat.n + 1):
                if (v, lab) in in_used:
                    continue
                yield RootedPattern(
                    pat.n, pat.root, pat.alphabet,
                    pat.edges | {(u, v, lab)}, pat.max_vertices,
                )
        if pat.n < size_bound:
            w = pat.n + 1
            for u in range(1, pat.n + 1):
                if (u, lab) not in out_used:
                    yield RootedPattern(
                        pat.n + 1, pat.root, pat.alphabet,
                        pat.edges | {(u, w, lab)}, pat.max_vertices,
                    )
                if (u, lab) not in in_used:
                    yield RootedPattern(
                        pat.n + 1, pat.root, pat.alphabet,
                        pat.edges | {(w, u, lab)}, pat.max_vertices,
                    )


def stat_distance_truncated(
    g1: LabeledDigraph, g2: LabeledDigraph, size_bound: int
) -> Fraction:
    """Weighted l1 distance between pattern frequency vectors, truncated
    to patterns with at most ``size_bound`` vertices.  A pseudometric for
    any fixed bound."""
    total, _ = stat_distance_details(g1, g2, size_bound)
    return total


def stat_distance_details(
    g1: LabeledDigraph, g2: LabeledDigraph, size_bound: int
) -> tuple[Fraction, list[dict]]:
    """Distance plus one row per pattern with a nonzero contribution."""
    if g1.alphabet != g2.alphabet:
        raise AlphabetMismatchError(
            f"alphabets differ: {g1.alphabet} vs {g2.alphabet}"
        )
    total = Fraction(0)
    rows = []
    for j, (pat, weight) in enumerate(enumerate_patterns(g1.alphabet, size_bound), 1):
        f1 = pattern_frequency(g1, pat)
        f2 = pattern_frequency(g2, pat)
        delta = abs(f1 - f2)
        if delta:
            total += weight * delta
            rows.append(
                {
                    "index": j,
                    "vertices": pat.n,
                    "root": pat.root,
                    "edges": sorted(
                        [u, v, pat.alphabet[lab]] for u, v, lab in pat.edges
                    ),
                    "weight": str(weight),
                    "f1": str(f1),
                    "f2": str(f2),
                }
            )
    return total, rows


def bs_word_statistics(
    psi: PermHomomorphism, A: Iterable, B: Iterable
) -> Fraction:
    """Fraction of points fixed by every evaluated word of ``A`` and
    moved by every evaluated word of ``B``."""
    return bs_statistic(psi, A, B)


# ---------------------------------------------------------------------------
# encoding labeled digraphs into simple graphs


@dataclass(frozen=True)
class SimpleGraph:
    """Undirected simple graph on vertices ``1..n``."""

    n: int
    edges: frozenset[frozenset[int]]

    def __post_init__(self):
        for e in self.edges:
            if len(e) != 2:
                raise MalformedInputError("edges must join two distinct vertices")
            if not all(1 <= v <= self.n for v in e):
                raise MalformedInputError("edge endpoint outside vertex range")

    def degree_map(self) -> dict[int, int]:
        deg = {v: 0 for v in range(1, self.n + 1)}
        for e in self.edges:
            for v in e:
                deg[v] += 1
        return deg

    def max_degree(self) -> int:
        return max(self.degree_map().values(), default=0)

    def adjacency(self) -> dict[int, set[int]]:
        adj: dict[int, set[int]] = {v: set() for v in range(1, self.n + 1)}
        for e in self.edges:
            u, v = tuple(e)
            adj[u].add(v)
            adj[v].add(u)
        return adj


# Gadget layout, per labeled edge (u, v, label index i with i >= 1):
#
#   u -- a -- b -- v        two subdivision vertices
#        |    |
#        o1   t1
#        |    |
#        o2   ...            pendant paths: length 2 at a (marks the
#             t_{2+i}        source side), length 2+i at b (the label)
#
# Pendant lengths 2 and >= 3 never collide with original vertices, whose
# own pendant-free neighborhoods consist of subdivision vertices only, so
# the construction is decodable and injective up to isomorphism.
# Per edge: 2 + 2 + (2+i) new vertices and 7 + i new edges.


def encode_to_simple(
    graph: LabeledDigraph, alphabet_bound: int = DEFAULT_ALPHABET_BOUND
) -> SimpleGraph:
    """Encode orientation and labels into pendant-path gadgets.

    Output max degree is ``max(input total degree, 3)``, i.e. at most the
    input maximum degree plus 2.
    """
    if len(graph.alphabet) > alphabet_bound:
        raise BoundExceededError(
            f"alphabet size {len(graph.alphabet)} exceeds {alphabet_bound}"
        )
    next_vertex = graph.n + 1
    edges: set[frozenset[int]] = set()

    def fresh() -> int:
        nonlocal next_vertex
        v = next_vertex
        next_vertex += 1
        return v

    def path(start: int, length: int):
        cur = start
        for _ in range(length):
            nxt = fresh()
            edges.add(frozenset((cur, nxt)))
            cur = nxt

    for u, v, lab in sorted(
        (u, v, graph.alphabet.index(lab)) for u, v, lab in graph.edges()
    ):
        a = fresh()
        b = fresh()
        edges.add(frozenset((u, a)))
        edges.add(frozenset((a, b)))
        edges.add(frozenset((b, v)))
        path(a, 2)
        path(b, 2 + (lab + 1))
    return SimpleGraph(next_vertex - 1, frozenset(edges))


def decode_simple(encoded: SimpleGraph, alphabet: Sequence[str]) -> LabeledDigraph:
    """Invert :func:`encode_to_simple` (raises on non-encodings)."""
    adj = encoded.adjacency()
    deg = encoded.degree_map()
    pendant_at: dict[int, list[tuple[int, int]]] = {}
    kind: dict[int, str] = {}
    on_pendant: set[int] = set()
    for tip in range(1, encoded.n + 1):
        if deg[tip] != 1:
            continue
        prev, cur, length = None, tip, 0
        chain = []
        while deg[cur] in (1, 2) and not (deg[cur] == 1 and length > 0):
            chain.append(cur)
            nxts = [w for w in adj[cur] if w != prev]
            if not nxts:
                raise MalformedInputError("dangling path is not a gadget pendant")
            prev, cur = cur, nxts[0]
            length += 1
        if length == 1:
            kind[tip] = "original"
            continue
        on_pendant.update(chain)
        pendant_at.setdefault(cur, []).append((length, tip))
    label_of_b: dict[int, int] = {}
    for v in range(1, encoded.n + 1):
        if v in kind or v in on_pendant:
            continue
        pend = pendant_at.get(v, [])
        if not pend:
            kind[v] = "original"
        elif len(pend) == 1 and pend[0][0] == 2:
            kind[v] = "a"
        elif len(pend) == 1 and pend[0][0] >= 3:
            kind[v] = "b"
            label_of_b[v] = pend[0][0] - 3  # 0-based label index
        else:
            raise MalformedInputError(f"vertex {v} has an unexpected pendant profile")
    originals = sorted(v for v, k in kind.items() if k == "original")
    renum = {v: i + 1 for i, v in enumerate(originals)}
    out_edges = []
    for a, k in kind.items():
        if k != "a":
            continue
        bs = [w for w in adj[a] if kind.get(w) == "b"]
        us = [w for w in adj[a] if kind.get(w) == "original"]
        if len(bs) != 1 or len(us) != 1:
            raise MalformedInputError(f"subdivision vertex {a} is malformed")
        b = bs[0]
        vs = [w for w in adj[b] if kind.get(w) == "original"]
        if len(vs) != 1:
            raise MalformedInputError(f"subdivision vertex {b} is malformed")
        lab = label_of_b[b]
        if lab >= len(alphabet):
            raise MalformedInputError(f"label index {lab} outside alphabet")
        out_edges.append((renum[us[0]], renum[vs[0]], alphabet[lab]))
    return LabeledDigraph.from_edges(len(originals), tuple(alphabet), out_edges)
