"""
Exact inversion numbers.

Two independent engines:

* ``inv_bfs`` -- breadth-first search over orientations of the fixed
  underlying graph, one inversion per step.
* ``inv_rank`` -- tournament minimum rank plus the zero-diagonal
  classification, which pins inv to ``tmr`` or ``tmr + 1``; the
  certificate is read off a Gram factorisation of a minimum-rank matrix.

The tmr search exploits that, once vertices are placed in a transitive
order one at a time, the row of the disagreement matrix belonging to the
newly placed vertex ``v`` depends only on the *set* ``P`` of vertices
placed before it::

    row(v) = (out(v) & P) | (in(v) & ~P)      plus a free diagonal bit

so the rank of the rows placed so far is a lower bound for any
completion.  The search is iterative deepening on that bound with a memo
keyed on (placed set, reduced row space).
"""

from __future__ import annotations

import itertools
import sys
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .complementation import adjacency_matrix, min_rank, system_from_matrix
from .errors import CertificateError, LimitExceeded
from .gf2linalg import insert_reduced, reduce_against
from .structures import (Digraph, Graph, SetFamily, apply_family, diff_graph, is_acyclic, topological_order,
                         members)

BFS_MAX_EDGES = 21
BFS_MAX_ACTIVE = 16
TMR_MAX_N = 10
EXHAUSTIVE_TMR_MAX_N = 7


@dataclass(frozen=True)
class InvResult:
    value: int
    certificate: SetFamily
    method: str  # "bfs" or "rank"
    tmr: int | None = None

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "method": self.method,
            "certificate": [members(X) for X in self.certificate],
            "tmr": self.tmr,
            "classified": self.tmr is not None,
        }


def check_decycling(D: Digraph, F: Sequence[int]) -> bool:
    return is_acyclic(apply_family(D, F))


def _verified(D: Digraph, res: InvResult) -> InvResult:
    if len(res.certificate) != res.value or not check_decycling(D, res.certificate):
        raise CertificateError(f"{res.method} engine produced an invalid certificate")
    return res


# ---------------------------------------------------------------------------
# breadth-first oracle


def _weak_components(D: Digraph) -> list[list[int]]:
    und = [o | i for o, i in zip(D.out, D.in_masks())]
    seen = 0
    comps = []
    for v in range(D.n):
        if (seen >> v) & 1 or not und[v]:
            continue
        comp, todo = 0, 1 << v
        while todo:
            low = todo & -todo
            todo ^= low
            comp |= low
            todo |= und[low.bit_length() - 1] & ~comp
        seen |= comp
        comps.append(members(comp))
    return comps


def _acyclic_states(states: np.ndarray, edges: Sequence[tuple[int, int]], n: int) -> np.ndarray:
    """Vectorised acyclicity test; bit ``k`` of a state set means ``a -> b`` for ``edges[k] = (a, b)``."""
    size = states.size
    outm = [np.zeros(size, dtype=np.int64) for _ in range(n)]
    for k, (a, b) in enumerate(edges):
        bit = (states >> k) & 1
        outm[a] |= bit << b
        outm[b] |= (bit ^ 1) << a
    remaining = np.full(size, (1 << n) - 1, dtype=np.int64)
    for _ in range(n):
        removed = np.zeros(size, dtype=np.int64)
        for v in range(n):
            sink = (outm[v] & remaining) == 0
            removed |= (sink.astype(np.int64) << v) & remaining
        if not removed.any():
            break
        remaining &= ~removed
    return remaining == 0


def _moves(edges: Sequence[tuple[int, int]], n: int) -> tuple[np.ndarray, list[int]]:
    """Distinct nonzero edge masks induced by vertex subsets, with one subset each."""
    subsets = np.arange(1 << n, dtype=np.int64)
    masks = np.zeros(subsets.size, dtype=np.int64)
    for k, (a, b) in enumerate(edges):
        masks |= ((subsets >> a) & (subsets >> b) & 1) << k
    uniq, first = np.unique(masks, return_index=True)
    keep = uniq != 0
    return uniq[keep], [int(x) for x in subsets[first[keep]]]


def _bfs_component(D: Digraph) -> list[int]:
    """Shortest decycling family of a weakly connected digraph (vertex masks in D's labels)."""
    edges = D.underlying_pairs()
    m = len(edges)
    start = sum(1 << k for k, (a, b) in enumerate(edges) if D.has_edge(a, b))
    if _acyclic_states(np.array([start], dtype=np.int64), edges, D.n)[0]:
        return []
    masks, sets = _moves(edges, D.n)
    move = np.zeros(1 << m, dtype=np.int32)  # index + 1 of the last move; 0 = unvisited
    visited = np.zeros(1 << m, dtype=bool)
    visited[start] = True
    frontier = np.array([start], dtype=np.int64)
    chunk = max(1, (1 << 22) // masks.size)
    while frontier.size:
        layer = []
        for lo in range(0, frontier.size, chunk):
            block = frontier[lo:lo + chunk]
            cand = (block[:, None] ^ masks[None, :]).ravel()
            which = np.tile(np.arange(masks.size, dtype=np.int32), block.size)
            fresh = ~visited[cand]
            cand, which = cand[fresh], which[fresh]
            cand, first = np.unique(cand, return_index=True)
            visited[cand] = True
            move[cand] = which[first] + 1
            hit = _acyclic_states(cand, edges, D.n)
            if hit.any():
                state = int(cand[np.argmax(hit)])
                fam = []
                while state != start:
                    k = int(move[state]) - 1
                    fam.append(sets[k])
                    state ^= int(masks[k])
                return fam[::-1]
            layer.append(cand)
        frontier = np.concatenate(layer) if layer else np.zeros(0, dtype=np.int64)
    raise AssertionError("orientation space exhausted without reaching an acyclic state")


def inv_bfs(D: Digraph, max_edges: int = BFS_MAX_EDGES) -> InvResult:
    """inv(D) by breadth-first search over orientation states.

    Weak components are searched separately: sets acting on different
    components never interact, so inv is the maximum over components and
    the certificates merge index-wise.
    """
    comps = _weak_components(D)
    parts = []
    for comp in comps:
        sub = D.induced(comp)
        if is_acyclic(sub):
            continue
        ne = sub.edge_count()
        if ne > max_edges:
            raise LimitExceeded(f"BFS oracle limited to {max_edges} edges per component, got {ne}")
        if sub.n > BFS_MAX_ACTIVE:
            raise LimitExceeded(f"BFS oracle limited to {BFS_MAX_ACTIVE} vertices per component")
        local = _bfs_component(sub)
        parts.append([sum(1 << comp[v] for v in members(X)) for X in local])
    value = max((len(p) for p in parts), default=0)
    cert = tuple(sum(p[j] for p in parts if j < len(p)) for j in range(value))
    return _verified(D, InvResult(value, cert, "bfs"))


# ---------------------------------------------------------------------------
# tournament minimum rank


@dataclass(frozen=True)
class TmrOutcome:
    """Tournament minimum rank with a witness.

    ``witness`` is ``(order, diag)``: the transitive order (source first)
    and the diagonal bits of a minimum-rank matrix.  Classification fields
    are ``None`` unless requested.  ``nonzero_witness`` is a minimum-rank
    achiever with a nonzero diagonal entry, when one exists.
    """

    tmr: int
    witness: tuple[tuple[int, ...], int]
    all_achievers_zero_diag: bool | None = None
    inv_value: int | None = None
    nonzero_witness: tuple[tuple[int, ...], int] | None = None

    @property
    def classified(self) -> bool:
        return self.all_achievers_zero_diag is not None

    def to_dict(self) -> dict:
        return {
            "tmr": self.tmr,
            "witness": {"order": list(self.witness[0]), "diag": members(self.witness[1])},
            "classified": self.classified,
            "all_achievers_zero_diag": self.all_achievers_zero_diag,
            "inv_value": self.inv_value,
        }


class _PrefixSearch:
    """Depth-first placement of vertices with a rank bound on the placed rows."""

    def __init__(self, D: Digraph):
        self.n = D.n
        self.full = (1 << D.n) - 1
        self.out = D.out
        self.inn = D.in_masks()

    def find(self, bound: int, need_nonzero_diag: bool = False):
        """First (order, diag) in lexicographic order with rank <= bound, or ``None``."""
        n, full, out, inn = self.n, self.full, self.out, self.inn
        failed = set()
        order: list[int] = []
        diag = [0]

        def rec(P: int, basis: tuple[int, ...], flag: bool) -> bool:
            if P == full:
                return flag or not need_nonzero_diag
            key = (P, basis, flag)
            if key in failed:
                return False
            room = len(basis) < bound
            for v in range(n):
                bit = 1 << v
                if P & bit:
                    continue
                row = (out[v] & P) | (inn[v] & ~P)
                for d in (0, bit):
                    r = reduce_against(row | d, basis)
                    if r:
                        if not room:
                            continue
                        nb = insert_reduced(basis, r)
                    else:
                        nb = basis
                    order.append(v)
                    diag[0] ^= d
                    if rec(P | bit, nb, flag or bool(d)):
                        return True
                    order.pop()
                    diag[0] ^= d
            failed.add(key)
            return False

        limit = sys.getrecursionlimit()
        sys.setrecursionlimit(max(limit, 4 * n + 100))
        try:
            if rec(0, (), False):
                return tuple(order), diag[0]
            return None
        finally:
            sys.setrecursionlimit(limit)


def tmr(D: Digraph, classify: bool = False, max_n: int = TMR_MAX_N) -> TmrOutcome:
    """Minimum GF(2) rank over all matrices of all disagreement graphs of ``D``.

    With ``classify`` the search also decides whether some minimum-rank
    matrix has a nonzero diagonal entry, which fixes ``inv_value``.
    """
    if not D.is_tournament():
        raise ValueError("tmr is defined for tournaments")
    topo = topological_order(D)
    if topo is not None:
        # transitive: only the zero matrix of an empty disagreement graph
        return TmrOutcome(0, (tuple(topo), 0), True, 0) if classify else TmrOutcome(0, (tuple(topo), 0))
    if D.n > max_n:
        raise LimitExceeded(f"tmr limited to n <= {max_n}, got {D.n}")
    search = _PrefixSearch(D)
    bound = 0
    while True:
        found = search.find(bound)
        if found is not None:
            break
        bound += 1
    if not classify:
        return TmrOutcome(bound, found)
    nonzero = search.find(bound, need_nonzero_diag=True)
    all_zero = nonzero is None
    return TmrOutcome(bound, found, all_zero, bound + 1 if all_zero else bound, nonzero)


@lru_cache(maxsize=1 << 17)
def _mr_of_code(n: int, code: int):
    return min_rank(Graph.from_code(n, code))


def tmr_exhaustive(D: Digraph, max_n: int = EXHAUSTIVE_TMR_MAX_N) -> TmrOutcome:
    """Literal tmr: minimum rank over every ordering and every diagonal.

    Independent of the prefix search; it enumerates all ``n!`` disagreement
    graphs and takes their free-diagonal minimum ranks (memoised by graph).
    The witness is the first ordering in lexicographic order attaining the
    minimum, with its smallest achieving diagonal.
    """
    if not D.is_tournament():
        raise ValueError("tmr is defined for tournaments")
    if D.n > max_n:
        raise LimitExceeded(f"exhaustive tmr limited to n <= {max_n}")
    best, witness, nonzero, all_zero = None, None, None, True
    for order in itertools.permutations(range(D.n)):
        out = _mr_of_code(D.n, diff_graph(D, order).code())
        if best is None or out.rank < best:
            best, witness, all_zero, nonzero = out.rank, (order, out.achievers[0]), True, None
        if out.rank == best:
            if out.has_nonzero_achiever:
                all_zero = False
                if nonzero is None:
                    nonzero = (order, next(d for d in out.achievers if d))
    inv_value = 0 if best == 0 else (best + 1 if all_zero else best)
    return TmrOutcome(best, witness, all_zero, inv_value, nonzero)


def certificate_from_witness(D: Digraph, order: Sequence[int], diag: int) -> SetFamily:
    """Decycling family read off the matrix ``(order, diag)`` of ``D``."""
    G = diff_graph(D, order)
    return system_from_matrix(G, adjacency_matrix(G, diag))


def inv_rank(D: Digraph, max_n: int = TMR_MAX_N) -> InvResult:
    out = tmr(D, classify=True, max_n=max_n)
    if out.tmr == 0:
        return _verified(D, InvResult(0, (), "rank", 0))
    order, diag = out.nonzero_witness or out.witness
    cert = certificate_from_witness(D, order, diag)
    return _verified(D, InvResult(out.inv_value, cert, "rank", out.tmr))


def inv(D: Digraph, method: str = "auto", cross_check: bool = False) -> InvResult:
    """Dispatch: tournaments to the rank engine, everything else to BFS.

    ``cross_check`` also runs BFS on tournaments below six vertices and
    insists both engines agree.
    """
    if method not in ("auto", "bfs", "rank"):
        raise ValueError(f"unknown method {method!r}")
    tournament = D.is_tournament()
    if method == "rank" or (method == "auto" and tournament):
        if not tournament:
            raise ValueError("the rank engine needs a tournament")
        res = inv_rank(D)
        if cross_check and D.n < 6:
            other = inv_bfs(D)
            if other.value != res.value:
                raise CertificateError(f"engines disagree: rank {res.value}, bfs {other.value}")
        return res
    return inv_bfs(D)
