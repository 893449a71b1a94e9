"""
Named verification suites and open-question searches.

Every suite walks a deterministic list of instances.  Each instance is a
JSON-ready payload checked by a per-suite ``check`` function that returns
a (possibly empty) list of violation details; a search ``probe`` returns
hit data or ``None``.  Records in a report carry the payload, so
:func:`recheck_record` can replay any of them from scratch.

Sharding: ``shard=(i, k)`` keeps the instances whose index is ``i`` mod
``k``.  Reports from all shards merge with :func:`merge_suite_reports` /
:func:`merge_search_reports` into the same report a single worker produces.
"""

from __future__ import annotations

import itertools
import json
import random
import time
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Iterable

from .complementation import (adjacency_matrix, c2_oracle, c2_via_rank, is_complementing_system,
                              min_rank, system_from_matrix)
from .errors import LemmaViolation
from .gf2linalg import (Gf2Matrix, block_compose, congruence_diagonalize, gram_factorize, inverse,
                        is_staircase, rank, rank_rows, staircase_conclusion)
from .inversion import check_decycling, inv_bfs, inv_rank, tmr, tmr_exhaustive
from .structures import (Digraph, Graph, apply_family, canonical_tournaments, cycle3, diff_graph,
                         dijoin, enumerate_tournaments, format_compact, format_digraph, greedy_decycling,
                         is_acyclic, kjoin, members, parse_compact, parse_digraph_text, sources_sinks,
                         tournament_completion, tournament_from_code, twins)

DEFAULT_SEED = 20240917


@dataclass
class SuiteReport:
    suite: str
    params: dict
    seed: int | None
    instances_checked: int
    violations: list[dict]
    runtime: float

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        d = asdict(self)
        d["type"] = "suite"
        d["passed"] = self.passed
        return d


@dataclass
class SearchReport:
    question: str
    space_description: str
    params: dict
    hits: list[dict]
    exhausted: bool
    instances_checked: int
    runtime: float
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["type"] = "search"
        return d


def merge_suite_reports(parts: list[SuiteReport]) -> SuiteReport:
    first = parts[0]
    violations = sorted((v for p in parts for v in p.violations), key=lambda r: r["index"])
    return SuiteReport(first.suite, first.params, first.seed, sum(p.instances_checked for p in parts),
                       violations, sum(p.runtime for p in parts))


def merge_search_reports(parts: list[SearchReport]) -> SearchReport:
    first = parts[0]
    hits = sorted((h for p in parts for h in p.hits), key=lambda r: r["index"])
    notes = sorted({n for p in parts for n in p.notes})
    return SearchReport(first.question, first.space_description, first.params, hits,
                        all(p.exhausted for p in parts), sum(p.instances_checked for p in parts),
                        sum(p.runtime for p in parts), notes)


def _run(kind: str, instances: Iterable[Any], shard: tuple[int, int]) -> tuple[int, list[dict]]:
    check = CHECKS[kind]
    i0, k = shard
    count, violations = 0, []
    for index, payload in enumerate(instances):
        if index % k != i0:
            continue
        count += 1
        for detail in check(payload):
            violations.append(_sealed({"kind": kind, "index": index, "instance": payload, "detail": detail}))
    return count, violations


def _search(kind: str, instances: Iterable[Any], shard: tuple[int, int]) -> tuple[int, list[dict]]:
    probe = PROBES[kind]
    i0, k = shard
    count, hits = 0, []
    for index, payload in enumerate(instances):
        if index % k != i0:
            continue
        count += 1
        data = probe(payload)
        if data is not None:
            hits.append(_sealed({"kind": kind, "index": index, "instance": payload, "data": data}))
    return count, hits


def _sealed(record: dict) -> dict:
    """Serialise a record and replay it from the serialised form before it enters a report."""
    record = json.loads(json.dumps(record))
    record["reproduced"] = recheck_record(record)
    return record


def _c(T: Digraph) -> str:
    return format_compact(T)


def _t(s: str) -> Digraph:
    return parse_compact(s)


def _canon_upto(nmax: int, nmin: int = 1) -> list[Digraph]:
    return [T for n in range(nmin, nmax + 1) for T in canonical_tournaments(n)]


# ---------------------------------------------------------------------------
# main theorem


def _single_inversion_decycles(D: Digraph) -> int | None:
    for X in range(1 << D.n):
        if X & (X - 1) and is_acyclic(apply_family(D, (X,))):
            return X
    return None


def _check_theorem_main(p: dict) -> list[dict]:
    D1, D2, k = _t(p["d1"]), _t(p["d2"]), p["inv"]
    D = dijoin(D1, D2)
    if k == 1:
        X = _single_inversion_decycles(D)
        return [] if X is None else [{"decycling_set": members(X)}]
    value = inv_rank(D).value
    return [] if value > k else [{"inv_dijoin": value}]


def verify_theorem_main(n1: int, n2: int, shard=(0, 1)) -> SuiteReport:
    """For canonical pairs with equal positive inv, inv(D1 -> D2) exceeds it."""
    t0 = time.perf_counter()
    left = [(T, inv_rank(T).value) for T in _canon_upto(n1)]
    right = [(T, inv_rank(T).value) for T in _canon_upto(n2)]
    instances = [{"d1": _c(A), "d2": _c(B), "inv": a}
                 for A, a in left for B, b in right if a == b >= 1]
    count, viol = _run("theorem_main", instances, shard)
    return SuiteReport("theorem-main", {"n1": n1, "n2": n2}, None, count, viol, time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# tmr dichotomy


def _check_cor_tmr(p: dict) -> list[dict]:
    T = _t(p["d"])
    oracle = inv_bfs(T).value
    out = tmr(T, classify=True)
    problems = []
    if oracle not in (out.tmr, out.tmr + 1):
        problems.append({"reason": "inv outside {tmr, tmr+1}", "inv": oracle, "tmr": out.tmr})
    if oracle == out.tmr + 1 and out.tmr % 2:
        problems.append({"reason": "inv = tmr + 1 with odd tmr", "inv": oracle, "tmr": out.tmr})
    if out.inv_value != oracle:
        problems.append({"reason": "classification disagrees with oracle", "inv": oracle,
                         "tmr": out.tmr, "all_zero": out.all_achievers_zero_diag})
    if T.n <= 5:
        ex = tmr_exhaustive(T)
        if (ex.tmr, ex.all_achievers_zero_diag) != (out.tmr, out.all_achievers_zero_diag):
            problems.append({"reason": "prefix search disagrees with exhaustive tmr",
                             "prefix": [out.tmr, out.all_achievers_zero_diag],
                             "exhaustive": [ex.tmr, ex.all_achievers_zero_diag]})
    return problems


def verify_cor_tmr(n: int, samples: int = 200, seed: int = DEFAULT_SEED, shard=(0, 1)) -> SuiteReport:
    """inv is tmr or tmr + 1 (the latter only for even tmr) and the diagonal test predicts which."""
    t0 = time.perf_counter()
    if n <= 5:
        instances = [{"d": _c(T)} for T in enumerate_tournaments(n)]
        used_seed, params = None, {"n": n, "mode": "exhaustive"}
    else:
        rng = random.Random(seed)
        N = n * (n - 1) // 2
        instances = [{"d": _c(tournament_from_code(n, rng.getrandbits(N)))} for _ in range(samples)]
        used_seed, params = seed, {"n": n, "mode": "sampled", "samples": samples}
    count, viol = _run("cor_tmr", instances, shard)
    return SuiteReport("cor-tmr", params, used_seed, count, viol, time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# staircase lemma


def _random_symmetric(n: int, rng: random.Random) -> Gf2Matrix:
    rows = [0] * n
    for i in range(n):
        for j in range(i, n):
            if rng.getrandbits(1):
                rows[i] |= 1 << j
                rows[j] |= 1 << i
    return Gf2Matrix(n, n, tuple(rows))


def _staircase_from_thresholds(n: int, thresholds: list[int]) -> Gf2Matrix:
    """Column ``j`` has ones exactly in rows ``>= thresholds[j]`` (thresholds non-decreasing)."""
    m = len(thresholds)
    rows = tuple(sum(1 << j for j in range(m) if i >= thresholds[j]) for i in range(n))
    return Gf2Matrix(n, m, rows)


def random_staircase_instance(rng: random.Random, nmax: int, tight: bool) -> tuple[Gf2Matrix, int, int]:
    """Random valid input of the staircase lemma.

    Tight instances have ``rank(M) = rank(A)``: every column of ``C`` lies in
    the column space of ``A`` (``C = A Y``) and ``B = Y^T A Y``, which is the
    only regime where the lemma says something beyond rank growth.
    """
    while True:
        n = rng.randint(1, nmax)
        A = _random_symmetric(n, rng)
        ra = rank(A)
        if ra + 1 <= nmax:
            break
    m = rng.randint(ra + 1, nmax)
    if not tight:
        thresholds = sorted(rng.randint(0, n) for _ in range(m))
        C = _staircase_from_thresholds(n, thresholds)
        B = _random_symmetric(m, rng)
        return block_compose(A, B, C), n, m
    # suffix indicator vectors s_t (rows t..n-1) lying in the column space of A
    colspace_rank = ra
    allowed = [t for t in range(n + 1)
               if rank_rows(list(A.rows) + [((1 << n) - 1) & ~((1 << t) - 1)]) == colspace_rank]
    thresholds = sorted(rng.choice(allowed) for _ in range(m))
    C = _staircase_from_thresholds(n, thresholds)
    Y = _solve_columns(A, C)
    B = Y.T @ A @ Y
    return block_compose(A, B, C), n, m


def _solve_columns(A: Gf2Matrix, C: Gf2Matrix) -> Gf2Matrix:
    """Some ``Y`` with ``A Y = C``; columns of ``C`` must lie in the column space of ``A``."""
    n, m = A.nrows, C.ncols
    # Gauss-Jordan on [A | C] row-wise (A is symmetric so column space = row space)
    work = [A.rows[i] | (C.rows[i] << n) for i in range(n)]
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, n) if (work[i] >> col) & 1), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        for i in range(n):
            if i != r and (work[i] >> col) & 1:
                work[i] ^= work[r]
        pivots.append(col)
        r += 1
    if any(work[i] >> n for i in range(r, n)):
        raise ValueError("C is not in the column space of A")
    rows = [0] * n
    for i, col in enumerate(pivots):
        rows[col] = work[i] >> n
    return Gf2Matrix(n, m, tuple(rows))


def _check_staircase(p: dict) -> list[dict]:
    M = Gf2Matrix.from_text(p["matrix"])
    try:
        staircase_conclusion(M, p["n"], p["m"])
    except LemmaViolation:
        return [{"reason": "no disjunct holds"}]
    return []


def verify_lemma_staircase(trials: int = 10_000, nmax: int = 8, seed: int = DEFAULT_SEED,
                           shard=(0, 1)) -> SuiteReport:
    t0 = time.perf_counter()
    rng = random.Random(seed)
    instances = []
    for k in range(trials):
        M, n, m = random_staircase_instance(rng, nmax, tight=bool(k % 2 == 0))
        instances.append({"matrix": M.to_text(), "n": n, "m": m})
    count, viol = _run("staircase", instances, shard)
    return SuiteReport("lemma-staircase", {"trials": trials, "nmax": nmax}, seed, count, viol,
                       time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# k-joins of the directed triangle


def _check_kjoin_c3(p: dict) -> list[dict]:
    k = p["k"]
    D = kjoin([cycle3()] * k)
    res = inv_rank(D)
    problems = []
    if res.value != k:
        problems.append({"reason": "inv differs from k", "inv": res.value, "tmr": res.tmr})
    if not check_decycling(D, res.certificate) or len(res.certificate) != res.value:
        problems.append({"reason": "certificate invalid"})
    if D.n <= 6 and inv_bfs(D).value != res.value:
        problems.append({"reason": "engines disagree"})
    return problems


def verify_kjoin_c3(kmax: int = 3, shard=(0, 1)) -> SuiteReport:
    t0 = time.perf_counter()
    count, viol = _run("kjoin_c3", [{"k": k} for k in range(1, kmax + 1)], shard)
    return SuiteReport("kjoin-c3", {"kmax": kmax}, None, count, viol, time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# elementary propositions


def random_digraph(n: int, rng: random.Random, density: float | None = None) -> Digraph:
    """Each pair independently: no arc with probability ``1 - density``, else a random direction."""
    p = rng.random() if density is None else density
    out = [0] * n
    for a, b in itertools.combinations(range(n), 2):
        if rng.random() < p:
            if rng.getrandbits(1):
                out[a] |= 1 << b
            else:
                out[b] |= 1 << a
    return Digraph(n, tuple(out))


def plant_twin(D: Digraph, u: int, rng: random.Random) -> Digraph:
    """Add a new vertex ``D.n`` copying the neighbourhoods of ``u`` (random arc between them)."""
    n = D.n
    out = list(D.out) + [D.out[u]]
    for w in range(n):
        if (D.out[w] >> u) & 1:
            out[w] |= 1 << n
    choice = rng.randrange(3)
    if choice == 1:
        out[u] |= 1 << n
    elif choice == 2:
        out[n] |= 1 << u
    return Digraph(n + 1, tuple(out))


def _check_props(p: dict) -> list[dict]:
    D = parse_digraph_text(p["digraph"])
    problems = []
    fam = greedy_decycling(D)
    if not is_acyclic(apply_family(D, fam)) or len(fam) > max(D.n - 1, 0):
        problems.append({"prop": "upper bound", "family": [members(X) for X in fam]})
    base = inv_bfs(D)
    star = tournament_completion(D, base.certificate)
    if not (D.is_subgraph_of(star) and star.is_tournament() and inv_bfs(star).value == base.value):
        problems.append({"prop": "tournament completion", "completion": format_digraph(star)})
    if D.n >= 2:
        sources, sinks = sources_sinks(D)
        for v in members(sources | sinks):
            if inv_bfs(D.delete_vertex(v)).value != base.value:
                problems.append({"prop": "source/sink deletion", "vertex": v})
        for u, v in twins(D):
            if inv_bfs(D.delete_vertex(v)).value != base.value:
                problems.append({"prop": "twin deletion", "twins": [u, v]})
    sub = p.get("subgraph_seed")
    if sub is not None:
        rng = random.Random(sub)
        D1 = Digraph(D.n, tuple(o & rng.getrandbits(D.n) for o in D.out))
        if inv_bfs(D1).value > base.value:
            problems.append({"prop": "monotonicity", "subgraph": format_digraph(D1)})
    return problems


def prop_instances(n: int, samples: int, seed: int) -> list[dict]:
    """Random digraphs on 2..n vertices; every fourth one has a planted twin pair."""
    rng = random.Random(seed)
    out = []
    for k in range(samples):
        size = rng.randint(2, n)
        if k % 4 == 3:
            D = plant_twin(random_digraph(size - 1, rng), rng.randrange(size - 1), rng)
        else:
            D = random_digraph(size, rng)
        out.append({"digraph": format_digraph(D), "subgraph_seed": rng.getrandbits(32)})
    return out


def verify_props(n: int = 5, samples: int = 1000, seed: int = DEFAULT_SEED, shard=(0, 1)) -> SuiteReport:
    """Upper bound, tournament completion, source/sink and twin deletion, monotonicity."""
    t0 = time.perf_counter()
    count, viol = _run("props", prop_instances(n, samples, seed), shard)
    return SuiteReport("props", {"n": n, "samples": samples}, seed, count, viol, time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# engine agreement, minimum-rank lemma, certificates, factorisations


def _check_engines(p: dict) -> list[dict]:
    T = _t(p["d"])
    a, b = inv_bfs(T), inv_rank(T)
    return [] if a.value == b.value else [{"bfs": a.value, "rank": b.value}]


def verify_engines(n: int = 5, samples: int = 1000, seed: int = DEFAULT_SEED, shard=(0, 1)) -> SuiteReport:
    """Rank engine against the BFS oracle (exhaustive for n <= 5)."""
    t0 = time.perf_counter()
    if n <= 5:
        instances = [{"d": _c(T)} for T in enumerate_tournaments(n)]
        used_seed, params = None, {"n": n, "mode": "exhaustive"}
    else:
        rng = random.Random(seed)
        N = n * (n - 1) // 2
        instances = [{"d": _c(tournament_from_code(n, rng.getrandbits(N)))} for _ in range(samples)]
        used_seed, params = seed, {"n": n, "mode": "sampled", "samples": samples}
    count, viol = _run("engines", instances, shard)
    return SuiteReport("engines", params, used_seed, count, viol, time.perf_counter() - t0)


def _check_minrank(p: dict) -> list[dict]:
    G = Graph.from_code(p["n"], p["code"])
    c2, fam = c2_oracle(G)
    out = min_rank(G)
    problems = []
    if c2_via_rank(G) != c2:
        problems.append({"reason": "c2 via rank differs from oracle", "c2": c2, "mr": out.rank})
    if c2 not in (out.rank, out.rank + 1) or (c2 == out.rank + 1 and out.rank % 2):
        problems.append({"reason": "dichotomy fails", "c2": c2, "mr": out.rank})
    if not is_complementing_system(G, fam):
        problems.append({"reason": "oracle witness invalid"})
    return problems


def verify_lemma_minrank(n: int = 5, shard=(0, 1)) -> SuiteReport:
    """c2 from the minimum-rank classification against the complementation oracle, all graphs on n vertices."""
    t0 = time.perf_counter()
    instances = [{"n": n, "code": code} for code in range(1 << (n * (n - 1) // 2))]
    count, viol = _run("minrank", instances, shard)
    return SuiteReport("lemma-minrank", {"n": n}, None, count, viol, time.perf_counter() - t0)


def _check_certificates(p: dict) -> list[dict]:
    problems = []
    if "tournament" in p:
        T = _t(p["tournament"])
        for res in (inv_rank(T), inv_bfs(T)):
            if len(res.certificate) != res.value or not check_decycling(T, res.certificate):
                problems.append({"engine": res.method})
    if "digraph" in p:
        D = parse_digraph_text(p["digraph"])
        res = inv_bfs(D)
        if len(res.certificate) != res.value or not check_decycling(D, res.certificate):
            problems.append({"engine": "bfs"})
        fam = greedy_decycling(D)
        if not check_decycling(D, fam):
            problems.append({"engine": "greedy"})
    if "graph" in p:
        G = Graph.from_code(p["graph"][0], p["graph"][1])
        out = min_rank(G)
        for d in out.achievers[:4]:
            fam = system_from_matrix(G, adjacency_matrix(G, d))
            if not is_complementing_system(G, fam):
                problems.append({"engine": "system_from_matrix", "diag": d})
        _, fam = c2_oracle(G)
        if not is_complementing_system(G, fam):
            problems.append({"engine": "c2_oracle"})
    return problems


def certificate_instances(samples: int, seed: int) -> list[dict]:
    rng = random.Random(seed)
    out = []
    for k in range(samples):
        kind = k % 3
        if kind == 0:
            n = rng.randint(2, 7)
            out.append({"tournament": _c(tournament_from_code(n, rng.getrandbits(n * (n - 1) // 2)))})
        elif kind == 1:
            out.append({"digraph": format_digraph(random_digraph(rng.randint(1, 6), rng))})
        else:
            n = rng.randint(1, 6)
            out.append({"graph": [n, rng.getrandbits(n * (n - 1) // 2)]})
    return out


def verify_certificates(samples: int = 1000, seed: int = DEFAULT_SEED, shard=(0, 1)) -> SuiteReport:
    t0 = time.perf_counter()
    count, viol = _run("certificates", certificate_instances(samples, seed), shard)
    return SuiteReport("certificates", {"samples": samples}, seed, count, viol, time.perf_counter() - t0)


def _check_gram(p: dict) -> list[dict]:
    M = Gf2Matrix.from_text(p["matrix"])
    n = M.nrows
    problems = []
    res = congruence_diagonalize(M)
    r = rank(M)
    if res.alternating:
        if M.diagonal() != 0:
            problems.append({"reason": "alternating flag with nonzero diagonal"})
        if r % 2:
            problems.append({"reason": "alternating matrix of odd rank", "rank": r})
    else:
        P = res.transform
        expected = Gf2Matrix(n, n, tuple((1 << i) if i < res.rank else 0 for i in range(n)))
        try:
            inverse(P)
        except ValueError:
            problems.append({"reason": "transform singular"})
        if P @ M @ P.T != expected or res.rank != r:
            problems.append({"reason": "P M P^T is not I_r + 0"})
    Phi = gram_factorize(M)
    G = Phi @ Phi.T
    if res.alternating:
        if any((a ^ b) & ~(1 << i) for i, (a, b) in enumerate(zip(G.rows, M.rows))) or Phi.ncols > r + 1:
            problems.append({"reason": "alternating factor wrong off the diagonal", "d": Phi.ncols})
    elif G != M or Phi.ncols != r:
        problems.append({"reason": "Phi Phi^T != M", "d": Phi.ncols})
    return problems


def gram_instances(samples: int, nmax: int, seed: int) -> list[dict]:
    """Random symmetric matrices; every third one has its diagonal cleared (alternating)."""
    rng = random.Random(seed)
    out = []
    for k in range(samples):
        M = _random_symmetric(rng.randint(1, nmax), rng)
        if k % 3 == 2:
            M = M.with_diagonal(0)
        out.append({"matrix": M.to_text()})
    return out


def verify_gram(samples: int = 1000, nmax: int = 10, seed: int = DEFAULT_SEED, shard=(0, 1)) -> SuiteReport:
    t0 = time.perf_counter()
    count, viol = _run("gram", gram_instances(samples, nmax, seed), shard)
    return SuiteReport("gram", {"samples": samples, "nmax": nmax}, seed, count, viol, time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# searches


def _probe_inv_eq_tmr_pair(p: dict) -> dict | None:
    D1, D2 = _t(p["d1"]), _t(p["d2"])
    value = inv_rank(dijoin(D1, D2)).value
    if value < p["inv1"] + p["inv2"]:
        return {"inv1": p["inv1"], "inv2": p["inv2"], "inv_dijoin": value}
    return None


def search_inv_eq_tmr_pairs(nmax: int, shard=(0, 1)) -> SearchReport:
    """Pairs with inv = tmr on both sides whose dijoin has inv below the sum.

    Transitive factors are skipped: the dijoin is at least as hard as either
    side, so they can never produce a hit.
    """
    t0 = time.perf_counter()
    pool = []
    for T in _canon_upto(nmax, 3):
        out = tmr(T, classify=True)
        if out.inv_value == out.tmr >= 1:
            pool.append((T, out.inv_value))
    instances = [{"d1": _c(A), "d2": _c(B), "inv1": a, "inv2": b} for A, a in pool for B, b in pool]
    count, hits = _search("inv_eq_tmr_pairs", instances, shard)
    desc = f"ordered pairs of canonical non-transitive tournaments on 3..{nmax} vertices with inv = tmr"
    return SearchReport("inv-eq-tmr-pairs", desc, {"nmax": nmax}, hits, True, count, time.perf_counter() - t0)


def _probe_tmr_subadditivity(p: dict) -> dict | None:
    D1, D2 = _t(p["d1"]), _t(p["d2"])
    a, b = tmr(D1).tmr, tmr(D2).tmr
    c = tmr(dijoin(D1, D2)).tmr
    return {"tmr1": a, "tmr2": b, "tmr_dijoin": c} if c < a + b else None


def search_tmr_subadditivity(nmax: int, shard=(0, 1)) -> SearchReport:
    t0 = time.perf_counter()
    pool = _canon_upto(nmax)
    instances = [{"d1": _c(A), "d2": _c(B)} for A in pool for B in pool]
    count, hits = _search("tmr_subadditivity", instances, shard)
    desc = f"ordered pairs of canonical tournaments on 1..{nmax} vertices"
    return SearchReport("tmr-subadditivity", desc, {"nmax": nmax}, hits, True, count, time.perf_counter() - t0)


def _probe_c3(p: dict) -> dict | None:
    D, C3 = _t(p["d"]), cycle3()
    base = tmr(D).tmr
    right, left = tmr(dijoin(D, C3)).tmr, tmr(dijoin(C3, D)).tmr
    if right == left == base + 1:
        return None
    return {"tmr": base, "tmr_d_to_c3": right, "tmr_c3_to_d": left}


def search_c3_conjecture(nmax: int, shard=(0, 1)) -> SearchReport:
    t0 = time.perf_counter()
    instances = [{"d": _c(T)} for T in _canon_upto(nmax)]
    count, hits = _search("c3_conjecture", instances, shard)
    desc = f"canonical tournaments on 1..{nmax} vertices, both dijoins with the directed triangle"
    return SearchReport("c3-conjecture", desc, {"nmax": nmax}, hits, True, count, time.perf_counter() - t0)


def _probe_inv_eq_tmr_plus_one(p: dict) -> dict | None:
    D1 = _t(p["d"])
    out = tmr(D1, classify=True)
    if out.inv_value != out.tmr + 1 or out.tmr == 0:
        return None
    checks = []
    for D2 in _canon_upto(p["d2max"], 3):
        i2 = inv_rank(D2).value
        if i2 < 1:
            continue
        value = inv_rank(dijoin(D1, D2)).value
        checks.append({"d2": _c(D2), "inv2": i2, "inv_dijoin": value,
                       "holds": value <= out.inv_value + i2 - 1})
    return {"inv": out.inv_value, "tmr": out.tmr, "lemma_checks": checks}


def search_inv_eq_tmr_plus_one(nmax: int, d2max: int = 4, shard=(0, 1)) -> SearchReport:
    """Tournaments with inv = tmr + 1; each hit is tested against every small partner."""
    t0 = time.perf_counter()
    instances = [{"d": _c(T), "d2max": d2max} for T in _canon_upto(nmax)]
    count, hits = _search("inv_eq_tmr_plus_one", instances, shard)
    desc = f"canonical tournaments on 1..{nmax} vertices; partners on 3..{d2max} vertices"
    notes = [] if hits else [f"no tournament with inv = tmr + 1 on at most {nmax} vertices"]
    return SearchReport("inv-eq-tmr-plus-one", desc, {"nmax": nmax, "d2max": d2max}, hits, True, count,
                        time.perf_counter() - t0, notes)


# ---------------------------------------------------------------------------
# registry, serialisation, replay

CHECKS: dict[str, Callable[[Any], list[dict]]] = {
    "theorem_main": _check_theorem_main,
    "cor_tmr": _check_cor_tmr,
    "staircase": _check_staircase,
    "kjoin_c3": _check_kjoin_c3,
    "props": _check_props,
    "engines": _check_engines,
    "minrank": _check_minrank,
    "certificates": _check_certificates,
    "gram": _check_gram,
}

PROBES: dict[str, Callable[[Any], dict | None]] = {
    "inv_eq_tmr_pairs": _probe_inv_eq_tmr_pair,
    "tmr_subadditivity": _probe_tmr_subadditivity,
    "c3_conjecture": _probe_c3,
    "inv_eq_tmr_plus_one": _probe_inv_eq_tmr_plus_one,
}

SUITES: dict[str, Callable[..., SuiteReport]] = {
    "theorem-main": verify_theorem_main,
    "cor-tmr": verify_cor_tmr,
    "lemma-staircase": verify_lemma_staircase,
    "kjoin-c3": verify_kjoin_c3,
    "props": verify_props,
    "engines": verify_engines,
    "lemma-minrank": verify_lemma_minrank,
    "certificates": verify_certificates,
    "gram": verify_gram,
}

SEARCHES: dict[str, Callable[..., SearchReport]] = {
    "inv-eq-tmr-pairs": search_inv_eq_tmr_pairs,
    "tmr-subadditivity": search_tmr_subadditivity,
    "c3-conjecture": search_c3_conjecture,
    "inv-eq-tmr-plus-one": search_inv_eq_tmr_plus_one,
}


def recheck_record(record: dict) -> bool:
    """Re-run the check or probe behind a stored violation or hit; True if it reproduces exactly."""
    kind = record["kind"]
    if kind in CHECKS:
        return record["detail"] in CHECKS[kind](record["instance"])
    if kind in PROBES:
        return PROBES[kind](record["instance"]) == record["data"]
    raise ValueError(f"unknown record kind {kind!r}")


def report_from_dict(d: dict) -> SuiteReport | SearchReport:
    d = dict(d)
    kind = d.pop("type")
    d.pop("passed", None)
    if kind == "suite":
        return SuiteReport(**d)
    if kind == "search":
        return SearchReport(**d)
    raise ValueError(f"unknown report type {kind!r}")


def save_report(report: SuiteReport | SearchReport, path) -> None:
    with open(path, "w") as fh:
        json.dump(report.to_dict(), fh, indent=2)
        fh.write("\n")


def load_report(path, verify: bool = True) -> SuiteReport | SearchReport:
    """Load a report; with ``verify`` every stored record is replayed and must reproduce."""
    with open(path) as fh:
        report = report_from_dict(json.load(fh))
    if verify:
        records = report.violations if isinstance(report, SuiteReport) else report.hits
        bad = [r["index"] for r in records if not recheck_record(r)]
        if bad:
            raise ValueError(f"records {bad} do not reproduce")
    return report


# ---------------------------------------------------------------------------
# block structure of minimum-rank matrices of a dijoin


def dijoin_block_ranks(D1: Digraph, D2: Digraph) -> list[dict]:
    """Every minimum-rank matrix of ``D1 -> D2``, reordered D1-part first.

    For each achiever reports the ranks of the diagonal blocks, whether the
    cross block is a staircase, and whether the diagonal is nonzero.  Uses
    exhaustive enumeration, so keep ``D1.n + D2.n`` small.
    """
    D = dijoin(D1, D2)
    n1 = D1.n
    best = tmr(D).tmr
    first, second = list(range(n1)), list(range(n1, D.n))
    out = []
    for order in itertools.permutations(range(D.n)):
        G = diff_graph(D, order)
        mr = min_rank(G)
        if mr.rank != best:
            continue
        pos = {v: k for k, v in enumerate(order)}
        phi = sorted(first, key=pos.get) + sorted(second, key=pos.get)
        for d in mr.achievers:
            M = adjacency_matrix(G, d).permuted(phi)
            A = M.submatrix(range(n1), range(n1))
            B = M.submatrix(range(n1, D.n), range(n1, D.n))
            C = M.submatrix(range(n1), range(n1, D.n))
            out.append({"order": list(order), "diag": d, "rank": best, "rank_a": rank(A), "rank_b": rank(B),
                        "staircase": is_staircase(C), "nonzero_diag": d != 0})
    return out

