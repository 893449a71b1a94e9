"""
Oriented graphs, tournaments and undirected graphs on at most 64 vertices.

Vertex sets are plain int bitmasks throughout (bit ``v`` set means vertex
``v`` is a member); a set family is a tuple of such masks.  Digraphs store
one out-neighbourhood mask per vertex.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import FormatError

MAX_VERTICES = 64

VertexSet = int
SetFamily = tuple[int, ...]


def vset(vertices: Iterable[int]) -> VertexSet:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def members(mask: VertexSet) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def family(sets: Iterable[Iterable[int] | int]) -> SetFamily:
    """Normalise a family given as masks or vertex iterables."""
    return tuple(s if isinstance(s, int) else vset(s) for s in sets)


def _check_range(mask: VertexSet, n: int):
    if mask < 0 or mask >> n:
        raise ValueError(f"vertex set {members(mask)} not contained in range({n})")


# ---------------------------------------------------------------------------
# digraphs


@dataclass(frozen=True)
class Digraph:
    """Simple oriented graph: no loops, at most one arc per vertex pair."""

    n: int
    out: tuple[int, ...]

    def __post_init__(self):
        if not 0 <= self.n <= MAX_VERTICES:
            raise ValueError(f"vertex count must be in [0, {MAX_VERTICES}]")
        if len(self.out) != self.n:
            raise ValueError("need one out-neighbourhood per vertex")
        for v, o in enumerate(self.out):
            if o < 0 or o >> self.n:
                raise ValueError(f"out-neighbourhood of {v} out of range")
            if (o >> v) & 1:
                raise ValueError(f"loop at vertex {v}")
            w = o
            while w:
                low = w & -w
                u = low.bit_length() - 1
                if (self.out[u] >> v) & 1:
                    raise ValueError(f"both {v}->{u} and {u}->{v} present")
                w ^= low

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Digraph:
        out = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range")
            out[u] |= 1 << v
        return cls(n, tuple(out))

    @classmethod
    def empty(cls, n: int) -> Digraph:
        return cls(n, (0,) * n)

    @property
    def vertices(self) -> VertexSet:
        return (1 << self.n) - 1

    def in_neighbours(self, v: int) -> VertexSet:
        bit = 1 << v
        return vset(u for u in range(self.n) if self.out[u] & bit)

    def in_masks(self) -> tuple[int, ...]:
        inn = [0] * self.n
        for u, o in enumerate(self.out):
            w = o
            while w:
                low = w & -w
                inn[low.bit_length() - 1] |= 1 << u
                w ^= low
        return tuple(inn)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in members(self.out[u])]

    def edge_count(self) -> int:
        return sum(o.bit_count() for o in self.out)

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.out[u] >> v) & 1)

    def is_tournament(self) -> bool:
        full = self.vertices
        return all((o | i | (1 << v)) == full for v, (o, i) in enumerate(zip(self.out, self.in_masks())))

    def is_subgraph_of(self, other: Digraph) -> bool:
        return self.n == other.n and all(a & ~b == 0 for a, b in zip(self.out, other.out))

    def relabel(self, perm: Sequence[int]) -> Digraph:
        """Digraph with arc ``perm[u] -> perm[v]`` for each arc ``u -> v``."""
        out = [0] * self.n
        for u, o in enumerate(self.out):
            m = 0
            for v in members(o):
                m |= 1 << perm[v]
            out[perm[u]] = m
        return Digraph(self.n, tuple(out))

    def induced(self, keep: Sequence[int]) -> Digraph:
        """Sub-digraph induced on ``keep``, relabelled ``0..len(keep)-1`` in the given order."""
        pos = {v: k for k, v in enumerate(keep)}
        out = []
        for v in keep:
            out.append(vset(pos[u] for u in members(self.out[v]) if u in pos))
        return Digraph(len(keep), tuple(out))

    def delete_vertex(self, v: int) -> Digraph:
        return self.induced([u for u in range(self.n) if u != v])

    def underlying_pairs(self) -> list[tuple[int, int]]:
        """Vertex pairs ``(a, b)``, ``a < b``, joined by an arc in either direction."""
        return [(a, b) for a in range(self.n) for b in range(a + 1, self.n)
                if (self.out[a] >> b) & 1 or (self.out[b] >> a) & 1]


def cycle3() -> Digraph:
    """The directed triangle 0->1->2->0."""
    return Digraph.from_edges(3, [(0, 1), (1, 2), (2, 0)])


def transitive_tournament(n: int) -> Digraph:
    """TT_n with ``i -> j`` for every ``i < j``."""
    return Digraph(n, tuple(((1 << n) - 1) & ~((1 << (i + 1)) - 1) for i in range(n)))


def transitive_from_order(order: Sequence[int]) -> Digraph:
    """Transitive tournament in which ``order[i] -> order[j]`` for ``i < j``."""
    n = len(order)
    out = [0] * n
    later = 0
    for v in reversed(order):
        out[v] = later
        later |= 1 << v
    return Digraph(n, tuple(out))


# ---------------------------------------------------------------------------
# inversion


def invert(D: Digraph, X: VertexSet) -> Digraph:
    """Reverse every arc with both endpoints in ``X``."""
    _check_range(X, D.n)
    if X & (X - 1) == 0:
        return D
    out = list(D.out)
    for u in members(X):
        out[u] &= ~X
    for u in members(X):
        for v in members(D.out[u] & X):
            out[v] |= 1 << u
    return Digraph(D.n, tuple(out))


def apply_family(D: Digraph, F: Iterable[VertexSet]) -> Digraph:
    for X in F:
        D = invert(D, X)
    return D


def topological_order(D: Digraph) -> list[int] | None:
    """A topological ordering of ``D``, or ``None`` if ``D`` has a directed cycle."""
    inn = list(D.in_masks())
    ready = [v for v in range(D.n) if inn[v] == 0]
    order = []
    while ready:
        v = ready.pop()
        order.append(v)
        for w in members(D.out[v]):
            inn[w] &= ~(1 << v)
            if inn[w] == 0:
                ready.append(w)
    return order if len(order) == D.n else None


def is_acyclic(D: Digraph) -> bool:
    return topological_order(D) is not None


# ---------------------------------------------------------------------------
# constructions


def dijoin(D1: Digraph, D2: Digraph) -> Digraph:
    """Disjoint union plus every arc from ``D1`` to ``D2``; ``D2`` is shifted by ``D1.n``."""
    n1, n2 = D1.n, D2.n
    if n1 + n2 > MAX_VERTICES:
        raise ValueError(f"dijoin would have {n1 + n2} > {MAX_VERTICES} vertices")
    second = ((1 << n2) - 1) << n1
    out = [o | second for o in D1.out] + [o << n1 for o in D2.out]
    return Digraph(n1 + n2, tuple(out))


def kjoin(Ds: Sequence[Digraph]) -> Digraph:
    if not Ds:
        raise ValueError("kjoin needs at least one digraph")
    acc = Ds[0]
    for D in Ds[1:]:
        acc = dijoin(acc, D)
    return acc


def sources_sinks(D: Digraph) -> tuple[VertexSet, VertexSet]:
    inn = D.in_masks()
    sources = vset(v for v in range(D.n) if inn[v] == 0)
    sinks = vset(v for v in range(D.n) if D.out[v] == 0)
    return sources, sinks


def are_twins(D: Digraph, u: int, v: int, inn: Sequence[int] | None = None) -> bool:
    inn = D.in_masks() if inn is None else inn
    both = (1 << u) | (1 << v)
    return (D.out[u] & ~both) == (D.out[v] & ~both) and (inn[u] & ~both) == (inn[v] & ~both)


def twins(D: Digraph) -> list[tuple[int, int]]:
    inn = D.in_masks()
    return [(u, v) for u in range(D.n) for v in range(u + 1, D.n) if are_twins(D, u, v, inn)]


def greedy_decycling(D: Digraph) -> SetFamily:
    """Explicit decycling family with at most ``n - 1`` sets.

    Step ``i`` inverts ``i`` together with its current out-neighbours among
    later vertices, so afterwards ``i`` has no out-arcs to later vertices.
    Out-neighbourhoods are read from the digraph produced by the earlier
    steps.  No-op sets (size below two) are dropped.
    """
    fam = []
    for i in range(D.n - 1):
        later = ~((1 << i) - 1)
        X = (D.out[i] | (1 << i)) & later & D.vertices
        if X & (X - 1):
            fam.append(X)
            D = invert(D, X)
    return tuple(fam)


def tournament_completion(D: Digraph, F: Sequence[VertexSet]) -> Digraph:
    """A tournament containing ``D`` for which ``F`` is still decycling."""
    T = apply_family(D, F)
    order = topological_order(T)
    if order is None:
        raise ValueError("family is not decycling for the digraph")
    return apply_family(transitive_from_order(order), F)


# ---------------------------------------------------------------------------
# undirected graphs


@dataclass(frozen=True)
class Graph:
    n: int
    adj: tuple[int, ...]

    def __post_init__(self):
        if not 0 <= self.n <= MAX_VERTICES:
            raise ValueError(f"vertex count must be in [0, {MAX_VERTICES}]")
        if len(self.adj) != self.n:
            raise ValueError("need one adjacency mask per vertex")
        for v, a in enumerate(self.adj):
            if a < 0 or a >> self.n:
                raise ValueError(f"adjacency of {v} out of range")
            if (a >> v) & 1:
                raise ValueError(f"loop at vertex {v}")
            for u in members(a):
                if not (self.adj[u] >> v) & 1:
                    raise ValueError(f"adjacency not symmetric at ({v}, {u})")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        adj = [0] * n
        for u, v in edges:
            if u == v or not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"bad edge ({u}, {v})")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj))

    @classmethod
    def empty(cls, n: int) -> Graph:
        return cls(n, (0,) * n)

    @classmethod
    def complete(cls, n: int) -> Graph:
        full = (1 << n) - 1
        return cls(n, tuple(full & ~(1 << v) for v in range(n)))

    @classmethod
    def from_code(cls, n: int, code: int) -> Graph:
        """Inverse of :meth:`code`."""
        adj = [0] * n
        for k, (a, b) in enumerate(pairs(n)):
            if (code >> k) & 1:
                adj[a] |= 1 << b
                adj[b] |= 1 << a
        return cls(n, tuple(adj))

    def code(self) -> int:
        """Edge set as an int: bit ``k`` is the ``k``-th pair of :func:`pairs`."""
        c = 0
        for k, (a, b) in enumerate(pairs(self.n)):
            if (self.adj[a] >> b) & 1:
                c |= 1 << k
        return c

    def edges(self) -> list[tuple[int, int]]:
        return [(a, b) for a in range(self.n) for b in members(self.adj[a]) if a < b]

    def edge_count(self) -> int:
        return sum(a.bit_count() for a in self.adj) // 2

    def is_empty(self) -> bool:
        return not any(self.adj)

    def relabel(self, perm: Sequence[int]) -> Graph:
        adj = [0] * self.n
        for u, a in enumerate(self.adj):
            adj[perm[u]] = vset(perm[v] for v in members(a))
        return Graph(self.n, tuple(adj))


def pairs(n: int) -> list[tuple[int, int]]:
    """Vertex pairs ``(i, j)``, ``i < j``, in lexicographic order."""
    return list(itertools.combinations(range(n), 2))


def diff_graph(D: Digraph, order: Sequence[int]) -> Graph:
    """Pairs on which ``D`` disagrees with the transitive tournament of ``order``.

    ``order`` lists the vertices from source to sink of the transitive
    tournament, i.e. ``order[k]`` is the vertex at position ``k``.
    """
    if not D.is_tournament():
        raise ValueError("diff_graph needs a tournament")
    if sorted(order) != list(range(D.n)):
        raise ValueError("order must be a permutation of the vertices")
    adj = [0] * D.n
    before = 0
    for v in order:
        # arcs from v back to an earlier vertex disagree
        back = D.out[v] & before
        adj[v] |= back
        for u in members(back):
            adj[u] |= 1 << v
        before |= 1 << v
    return Graph(D.n, tuple(adj))


# ---------------------------------------------------------------------------
# tournament codes and enumeration


def tournament_code(T: Digraph) -> int:
    """Big-endian pair encoding: the first pair is the most significant bit.

    Bit for pair ``(i, j)`` is 1 iff ``i -> j``.  Numeric order of codes is
    lexicographic order of the upper-triangle bit strings.
    """
    N = T.n * (T.n - 1) // 2
    c = 0
    for k, (i, j) in enumerate(pairs(T.n)):
        if (T.out[i] >> j) & 1:
            c |= 1 << (N - 1 - k)
    return c


def tournament_from_code(n: int, code: int) -> Digraph:
    N = n * (n - 1) // 2
    if code < 0 or code >> N:
        raise ValueError(f"code out of range for n = {n}")
    out = [0] * n
    for k, (i, j) in enumerate(pairs(n)):
        if (code >> (N - 1 - k)) & 1:
            out[i] |= 1 << j
        else:
            out[j] |= 1 << i
    return Digraph(n, tuple(out))


@lru_cache(maxsize=None)
def _relabel_tables(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Per permutation and source pair: (target shift, orientation flip) for code relabeling."""
    P = pairs(n)
    N = len(P)
    index = {pr: k for k, pr in enumerate(P)}
    perms = list(itertools.permutations(range(n)))
    shift = np.zeros((len(perms), N), dtype=np.int64)
    flip = np.zeros((len(perms), N), dtype=np.int64)
    for r, p in enumerate(perms):
        for k, (i, j) in enumerate(P):
            a, b = p[i], p[j]
            flip[r, k] = a > b
            shift[r, k] = N - 1 - index[(min(a, b), max(a, b))]
    return shift, flip


def _all_relabeled_codes(n: int, code: int) -> np.ndarray:
    shift, flip = _relabel_tables(n)
    N = shift.shape[1]
    bits = (code >> np.arange(N - 1, -1, -1, dtype=np.int64)) & 1
    return ((bits[None, :] ^ flip) << shift).sum(axis=1)


def canonical_code(T: Digraph) -> int:
    """Smallest code over all vertex relabelings (brute force over n!)."""
    if T.n > 8:
        raise ValueError("canonical form is limited to n <= 8")
    if T.n < 2:
        return 0
    return int(_all_relabeled_codes(T.n, tournament_code(T)).min())


def canonical_form(T: Digraph) -> Digraph:
    return tournament_from_code(T.n, canonical_code(T))


def enumerate_tournaments(n: int, canonical: bool = False, start: int = 0,
                          stop: int | None = None) -> Iterator[Digraph]:
    """Labelled tournaments on ``n`` vertices in code order.

    With ``canonical`` only the lexicographically smallest member of each
    isomorphism class is yielded.  ``start``/``stop`` slice the stream by
    index, so disjoint index ranges shard the work deterministically.
    """
    if n > 7:
        raise ValueError("exhaustive enumeration is limited to n <= 7")
    N = n * (n - 1) // 2
    if not canonical:
        end = 1 << N if stop is None else min(stop, 1 << N)
        for code in range(start, end):
            yield tournament_from_code(n, code)
        return
    yield from itertools.islice(_canonical_stream(n), start, stop)


def _canonical_stream(n: int) -> Iterator[Digraph]:
    # scanning codes upward, the first unseen code of an orbit is its minimum
    N = n * (n - 1) // 2
    seen = np.zeros(1 << N, dtype=bool)
    for code in range(1 << N):
        if seen[code]:
            continue
        if n >= 2:
            seen[_all_relabeled_codes(n, code)] = True
        yield tournament_from_code(n, code)


def canonical_tournaments(n: int) -> list[Digraph]:
    return list(enumerate_tournaments(n, canonical=True))


def count_labeled_tournaments(n: int) -> int:
    return 2 ** (n * (n - 1) // 2)


def orderings(n: int) -> Iterator[tuple[int, ...]]:
    return itertools.permutations(range(n))


def n_orderings(n: int) -> int:
    return math.factorial(n)


# ---------------------------------------------------------------------------
# text formats


def _body_lines(text: str) -> list[tuple[int, str]]:
    out = []
    for k, ln in enumerate(text.splitlines(), start=1):
        ln = ln.split("#", 1)[0].strip()
        if ln:
            out.append((k, ln))
    return out


def _parse_edge_list(text: str, keyword: str) -> tuple[int, list[tuple[int, int, int]]]:
    lines = _body_lines(text)
    if not lines:
        raise FormatError(f"missing '{keyword} <n>' header", 1)
    lineno, head = lines[0]
    parts = head.split()
    if len(parts) != 2 or parts[0] != keyword:
        raise FormatError(f"expected header '{keyword} <n>'", lineno)
    try:
        n = int(parts[1])
    except ValueError:
        raise FormatError("vertex count is not an integer", lineno) from None
    if not 0 <= n <= MAX_VERTICES:
        raise FormatError(f"vertex count must be in [0, {MAX_VERTICES}]", lineno)
    edges = []
    for lineno, ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise FormatError("expected 'u v'", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise FormatError("vertex is not an integer", lineno) from None
        if not (0 <= u < n and 0 <= v < n):
            raise FormatError(f"vertex out of range [0, {n})", lineno)
        if u == v:
            raise FormatError(f"loop at vertex {u}", lineno)
        edges.append((lineno, u, v))
    return n, edges


def parse_digraph_text(text: str) -> Digraph:
    """Parse the ``digraph <n>`` edge-list format."""
    n, edges = _parse_edge_list(text, "digraph")
    out = [0] * n
    for lineno, u, v in edges:
        if (out[u] >> v) & 1:
            raise FormatError(f"duplicate edge {u} {v}", lineno)
        if (out[v] >> u) & 1:
            raise FormatError(f"orientation conflict: {v} {u} already present", lineno)
        out[u] |= 1 << v
    return Digraph(n, tuple(out))


def format_digraph(D: Digraph) -> str:
    lines = [f"digraph {D.n}"] + [f"{u} {v}" for u, v in D.edges()]
    return "\n".join(lines) + "\n"


def parse_graph_text(text: str) -> Graph:
    n, edges = _parse_edge_list(text, "graph")
    adj = [0] * n
    for lineno, u, v in edges:
        if (adj[u] >> v) & 1:
            raise FormatError(f"duplicate edge {u} {v}", lineno)
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return Graph(n, tuple(adj))


def format_graph(G: Graph) -> str:
    lines = [f"graph {G.n}"] + [f"{u} {v}" for u, v in G.edges()]
    return "\n".join(lines) + "\n"


def format_compact(T: Digraph) -> str:
    """``t:<n>:<hex>``; the pair bit string is left-aligned and zero-padded to whole nibbles."""
    if not T.is_tournament():
        raise ValueError("compact format is for tournaments only")
    N = T.n * (T.n - 1) // 2
    width = max(1, -(-N // 4))
    value = tournament_code(T) << (4 * width - N)
    return f"t:{T.n}:{value:0{width}x}"


def parse_compact(text: str) -> Digraph:
    parts = text.strip().split(":")
    if len(parts) != 3 or parts[0] != "t":
        raise FormatError("expected 't:<n>:<hex>'")
    try:
        n = int(parts[1])
        value = int(parts[2], 16) if parts[2] else 0
    except ValueError:
        raise FormatError("bad number in compact tournament") from None
    if not 0 <= n <= MAX_VERTICES:
        raise FormatError(f"vertex count must be in [0, {MAX_VERTICES}]")
    N = n * (n - 1) // 2
    width = max(1, len(parts[2]))
    pad = 4 * width - N
    if pad < 0:
        raise FormatError(f"hex string too short for {N} pair bits")
    if value & ((1 << pad) - 1):
        raise FormatError("nonzero padding bits in compact tournament")
    return tournament_from_code(n, value >> pad)
