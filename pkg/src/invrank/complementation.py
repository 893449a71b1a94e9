"""
Subgraph complementation, complementing systems and minimum rank with a
free diagonal.

A family of vertex sets is a complementing system of ``G`` when toggling
every pair inside each set, in turn, leaves no edges.  Faithful
orthogonal representations over GF(2) are the same objects read
column-wise, which is what makes rank factorisations into certificates.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import CertificateError, LimitExceeded
from .gf2linalg import Gf2Matrix, gram_factorize, parity, rank_rows
from .structures import Graph, SetFamily, VertexSet, _check_range, members, pairs

ACHIEVER_CAP = 1 << 16
MIN_RANK_MAX_N = 20
C2_ORACLE_MAX_N = 6


def complement_subgraph(G: Graph, X: VertexSet) -> Graph:
    _check_range(X, G.n)
    adj = list(G.adj)
    for v in members(X):
        adj[v] ^= X & ~(1 << v)
    return Graph(G.n, tuple(adj))


def apply_complementations(G: Graph, F: Sequence[VertexSet]) -> Graph:
    for X in F:
        G = complement_subgraph(G, X)
    return G


def is_complementing_system(G: Graph, F: Sequence[VertexSet]) -> bool:
    """Every edge lies in an odd number of sets, every non-edge in an even number."""
    for X in F:
        _check_range(X, G.n)
    # co-occurrence parity per vertex pair, accumulated as adjacency masks
    cover = [0] * G.n
    for X in F:
        for v in members(X):
            cover[v] ^= X & ~(1 << v)
    return tuple(cover) == G.adj


def adjacency_matrix(G: Graph, diag: int = 0) -> Gf2Matrix:
    """Element of M(G) with the given diagonal bits."""
    return Gf2Matrix(G.n, G.n, tuple(a | (diag & (1 << v)) for v, a in enumerate(G.adj)))


def in_matrix_class(G: Graph, M: Gf2Matrix) -> bool:
    """Whether ``M`` agrees with the adjacency matrix of ``G`` off the diagonal."""
    if (M.nrows, M.ncols) != (G.n, G.n):
        return False
    return all((r & ~(1 << v)) == a for v, (r, a) in enumerate(zip(M.rows, G.adj)))


# ---------------------------------------------------------------------------
# exhaustive c2


@lru_cache(maxsize=None)
def _complementation_table(n: int) -> tuple[np.ndarray, np.ndarray, list[int]]:
    """BFS from the empty graph over all graphs on ``n`` vertices.

    Returns (dist, move, moves): ``dist[code]`` is c2 of the graph with that
    edge code, ``move[code]`` the index of the last set on a shortest path.
    """
    P = pairs(n)
    N = len(P)
    index = {p: k for k, p in enumerate(P)}
    sets, masks = [], []
    for X in range(1 << n):
        if X.bit_count() < 2:
            continue
        vs = members(X)
        m = 0
        for a, b in itertools.combinations(vs, 2):
            m |= 1 << index[(a, b)]
        sets.append(X)
        masks.append(m)
    mask_arr = np.array(masks, dtype=np.int64)
    dist = np.full(1 << N, -1, dtype=np.int16)
    move = np.full(1 << N, -1, dtype=np.int32)
    dist[0] = 0
    frontier = np.array([0], dtype=np.int64)
    depth = 0
    while frontier.size:
        depth += 1
        cand = (frontier[:, None] ^ mask_arr[None, :]).ravel()
        which = np.tile(np.arange(len(masks), dtype=np.int32), frontier.size)
        fresh = dist[cand] < 0
        cand, which = cand[fresh], which[fresh]
        cand, first = np.unique(cand, return_index=True)
        dist[cand] = depth
        move[cand] = which[first]
        frontier = cand
    return dist, move, sets


def _pair_mask(X: int, n: int) -> int:
    index = {p: k for k, p in enumerate(pairs(n))}
    m = 0
    for a, b in itertools.combinations(members(X), 2):
        m |= 1 << index[(a, b)]
    return m


def c2_oracle(G: Graph, max_n: int = C2_ORACLE_MAX_N) -> tuple[int, SetFamily]:
    """Exact subgraph complementation number with a witness, by breadth-first search."""
    if G.n > max_n:
        raise LimitExceeded(f"c2 oracle limited to n <= {max_n}, got {G.n}")
    dist, move, sets = _complementation_table(G.n)
    code = G.code()
    fam = []
    while code:
        X = sets[move[code]]
        fam.append(X)
        code ^= _pair_mask(X, G.n)
    fam = tuple(fam)
    if len(fam) != int(dist[G.code()]) or not is_complementing_system(G, fam):
        raise CertificateError("c2 oracle produced an invalid witness")
    return len(fam), fam


# ---------------------------------------------------------------------------
# minimum rank


@dataclass(frozen=True)
class MinRankOutcome:
    """Minimum rank over M(G) with its achieving diagonals.

    ``achievers`` holds at most ``ACHIEVER_CAP`` diagonals; ``count`` is the
    true number of achievers.
    """

    rank: int
    achievers: tuple[int, ...]
    count: int
    unique: bool = field(init=False)
    zero_diag_unique: bool = field(init=False)

    def __post_init__(self):
        if not self.achievers or self.count < len(self.achievers):
            raise ValueError("achievers must be nonempty and count at least their number")
        object.__setattr__(self, "unique", self.count == 1)
        object.__setattr__(self, "zero_diag_unique", self.count == 1 and self.achievers[0] == 0)

    @property
    def has_nonzero_achiever(self) -> bool:
        return self.count > 1 or self.achievers[0] != 0

    def to_dict(self) -> dict:
        return {
            "rank": self.rank,
            "achievers": list(self.achievers),
            "count": self.count,
            "unique": self.unique,
            "zero_diag_unique": self.zero_diag_unique,
        }


def gray(k: int) -> int:
    return k ^ (k >> 1)


def min_rank_range(G: Graph, start: int, stop: int) -> MinRankOutcome:
    """Minimum over Gray-code indices ``start <= k < stop``; ranges merge with :func:`merge_min_rank`.

    The stored achievers are the numerically smallest ones, so the result
    does not depend on how the index space was split.
    """
    if not 0 <= start < stop <= 1 << G.n:
        raise ValueError(f"bad diagonal range [{start}, {stop})")
    best = G.n + 1
    kept: list[int] = []  # max-heap of negated diagonals
    count = 0
    adj = G.adj
    for k in range(start, stop):
        d = gray(k)
        r = rank_rows([a | (d & (1 << v)) for v, a in enumerate(adj)])
        if r < best:
            best, kept, count = r, [-d], 1
        elif r == best:
            count += 1
            if len(kept) < ACHIEVER_CAP:
                heapq.heappush(kept, -d)
            elif d < -kept[0]:
                heapq.heapreplace(kept, -d)
    return MinRankOutcome(best, tuple(sorted(-x for x in kept)), count)


def merge_min_rank(parts: Sequence[MinRankOutcome]) -> MinRankOutcome:
    best = min(p.rank for p in parts)
    winners = [p for p in parts if p.rank == best]
    achievers = sorted(d for p in winners for d in p.achievers)[:ACHIEVER_CAP]
    return MinRankOutcome(best, tuple(achievers), sum(p.count for p in winners))


def min_rank(G: Graph, max_n: int = MIN_RANK_MAX_N) -> MinRankOutcome:
    """mr(G): the minimum GF(2) rank of the adjacency matrix over all 2^n diagonals."""
    if G.n > max_n:
        raise LimitExceeded(f"min_rank limited to n <= {max_n}, got {G.n}")
    return min_rank_range(G, 0, 1 << G.n)


def c2_via_rank(G: Graph) -> int:
    """c2 from the minimum-rank classification: mr + 1 exactly when the zero diagonal is the unique achiever."""
    if G.is_empty():
        return 0
    out = min_rank(G)
    return out.rank + 1 if out.zero_diag_unique else out.rank


# ---------------------------------------------------------------------------
# representations


@dataclass(frozen=True)
class Representation:
    """Vertex ``v`` is mapped to the packed vector ``vectors[v]`` in GF(2)^dim."""

    dim: int
    vectors: tuple[int, ...]

    def gram(self) -> Gf2Matrix:
        n = len(self.vectors)
        rows = []
        for x in self.vectors:
            rows.append(sum(parity(x & y) << j for j, y in enumerate(self.vectors)))
        return Gf2Matrix(n, n, tuple(rows))

    def is_faithful_for(self, G: Graph) -> bool:
        if len(self.vectors) != G.n:
            return False
        for u, v in pairs(G.n):
            if parity(self.vectors[u] & self.vectors[v]) != (G.adj[u] >> v) & 1:
                return False
        return True


def family_from_representation(phi: Representation) -> SetFamily:
    """Coordinate ``i`` becomes the set of vertices whose vector has a 1 there."""
    fam = []
    for i in range(phi.dim):
        fam.append(sum(1 << v for v, x in enumerate(phi.vectors) if (x >> i) & 1))
    return tuple(fam)


def representation_from_family(G: Graph, F: Sequence[VertexSet]) -> Representation:
    if not is_complementing_system(G, F):
        raise ValueError("family is not a complementing system of the graph")
    vectors = tuple(sum(1 << i for i, X in enumerate(F) if (X >> v) & 1) for v in range(G.n))
    return Representation(len(F), vectors)


def system_from_matrix(G: Graph, M: Gf2Matrix) -> SetFamily:
    """Complementing system of ``G`` read off a Gram factorisation of ``M``.

    ``M`` must lie in M(G).  The family has ``rank(M)`` sets when ``M`` has
    a nonzero diagonal entry (or is zero); otherwise the alternating
    adjustment of :func:`gram_factorize` costs at most one extra set.
    """
    if not in_matrix_class(G, M):
        raise ValueError("matrix does not agree with the graph off the diagonal")
    Phi = gram_factorize(M)
    fam = family_from_representation(Representation(Phi.ncols, Phi.rows))
    if not is_complementing_system(G, fam):
        raise CertificateError("factorisation did not yield a complementing system")
    return fam


def all_graphs(n: int):
    """Every labelled graph on ``n`` vertices, by edge code."""
    for code in range(1 << (n * (n - 1) // 2)):
        yield Graph.from_code(n, code)
