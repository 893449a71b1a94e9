"""Acceptance gate.

One test per criterion; each logs a PASS/FAIL line (printed in the
terminal summary, and immediately with ``-s``).
"""

import contextlib
import itertools
import random
import time

import pytest

from invrank import verification as V
from invrank.complementation import all_graphs, c2_oracle, c2_via_rank
from invrank.inversion import check_decycling, inv_bfs, inv_rank, tmr
from invrank.structures import (apply_family, canonical_tournaments, cycle3, dijoin, enumerate_tournaments,
                                greedy_decycling, is_acyclic, kjoin)

from conftest import nx_acyclic


@contextlib.contextmanager
def criterion(log, label, limit):
    t0 = time.perf_counter()
    notes = {}
    try:
        yield notes
        elapsed = time.perf_counter() - t0
        assert elapsed < limit, f"took {elapsed:.1f}s, limit {limit}s"
    except BaseException as exc:
        line = f"FAIL {label} ({time.perf_counter() - t0:.1f}s): {exc}"
        log.append(line)
        print("\n" + line)
        raise
    line = f"PASS {label} ({elapsed:.1f}s){': ' + notes['msg'] if 'msg' in notes else ''}"
    log.append(line)
    print("\n" + line)


TOURNAMENTS_5 = list(enumerate_tournaments(5))


def test_criterion_1_engine_equivalence(acceptance_log):
    with criterion(acceptance_log, "1 inv_rank = inv_bfs on all 1024 labeled 5-tournaments", 120) as notes:
        disagreements = 0
        for T in TOURNAMENTS_5:
            a, b = inv_rank(T), inv_bfs(T)
            disagreements += a.value != b.value
            assert check_decycling(T, a.certificate) and len(a.certificate) == a.value
        assert len(TOURNAMENTS_5) == 1024
        assert disagreements == 0, f"{disagreements} disagreements"
        notes["msg"] = "0 disagreements"


def test_criterion_2_tmr_dichotomy(acceptance_log):
    with criterion(acceptance_log, "2 inv in {tmr, tmr+1}, parity, classification on 1024 5-tournaments", 120) as notes:
        bad = 0
        for T in TOURNAMENTS_5:
            out = tmr(T, classify=True)
            oracle = inv_bfs(T).value
            ok = oracle in (out.tmr, out.tmr + 1)
            ok &= oracle == out.tmr or out.tmr % 2 == 0
            ok &= out.inv_value == oracle
            bad += not ok
        assert bad == 0, f"{bad} failures"
        notes["msg"] = "0 failures"


def _two_sets_decycle(D):
    """Brute force: does any family of at most two subsets decycle D?"""
    subsets = [X for X in range(1 << D.n) if X & (X - 1)]
    if is_acyclic(D):
        return True
    for X in subsets:
        once = apply_family(D, (X,))
        if is_acyclic(once):
            return True
        for Y in subsets:
            if Y > X and is_acyclic(apply_family(once, (Y,))):
                return True
    return False


def test_criterion_3_kjoin_c3(acceptance_log):
    with criterion(acceptance_log, "3 inv([C3]_k) = k for k = 1, 2, 3", 600) as notes:
        values = []
        for k in (1, 2, 3):
            D = kjoin([cycle3()] * k)
            res = inv_rank(D)
            assert res.value == k and res.tmr == k
            assert len(res.certificate) == k and check_decycling(D, res.certificate)
            assert nx_acyclic(apply_family(D, res.certificate))
            if D.n <= 6:
                assert inv_bfs(D).value == k
            values.append(res.value)
        # independent lower bound for k = 3
        assert not _two_sets_decycle(kjoin([cycle3()] * 3))
        notes["msg"] = f"inv = {values}, tmr lower bound and explicit certificates"


def test_criterion_4_theorem_desk_scale(acceptance_log):
    with criterion(acceptance_log, "4 no single inversion decycles D1->D2 for inv 1 pairs, n1, n2 <= 4", 60) as notes:
        ones = [T for n in range(1, 5) for T in canonical_tournaments(n) if inv_bfs(T).value == 1]
        pairs = 0
        for A, B in itertools.product(ones, repeat=2):
            D = dijoin(A, B)
            assert not any(X & (X - 1) and is_acyclic(apply_family(D, (X,))) for X in range(1 << D.n))
            pairs += 1
        report = V.verify_theorem_main(4, 4)
        assert report.passed and report.instances_checked == pairs
        notes["msg"] = f"{pairs} pairs, all subsets checked"


def test_criterion_5_c2_cross_validation(acceptance_log):
    with criterion(acceptance_log, "5 c2_via_rank = c2_oracle on all 1024 labeled 5-vertex graphs", 300) as notes:
        graphs = list(all_graphs(5))
        bad = sum(c2_via_rank(G) != c2_oracle(G)[0] for G in graphs)
        assert len(graphs) == 1024 and bad == 0, f"{bad} mismatches"
        notes["msg"] = "exact agreement"


def test_criterion_6_staircase(acceptance_log):
    with criterion(acceptance_log, "6 staircase lemma on 10^4 random block instances (n, m <= 8)", 60) as notes:
        report = V.verify_lemma_staircase(trials=10_000, nmax=8)
        assert report.instances_checked == 10_000
        assert report.passed, report.violations[:3]
        notes["msg"] = "0 violations"


def test_criterion_7_certificates(acceptance_log):
    with criterion(acceptance_log, "7 certificates on 10^3 random instances", 300) as notes:
        report = V.verify_certificates(samples=1000)
        assert report.instances_checked == 1000
        assert report.passed, report.violations[:3]
        notes["msg"] = "0 failures"


def test_criterion_8_constructions(acceptance_log):
    with criterion(acceptance_log, "8 greedy family, completion, source/sink and twin deletion", 300) as notes:
        rng = random.Random(V.DEFAULT_SEED)
        for _ in range(10_000):
            D = V.random_digraph(rng.randint(1, 10), rng)
            fam = greedy_decycling(D)
            assert len(fam) <= D.n - 1 and is_acyclic(apply_family(D, fam))
        report = V.verify_props(n=6, samples=1000)
        assert report.instances_checked == 1000
        assert report.passed, report.violations[:3]
        notes["msg"] = "10^4 greedy, 10^3 oracle-checked digraphs"


def test_criterion_9_gram(acceptance_log):
    with criterion(acceptance_log, "9 congruence and Gram factorisations on 10^3 symmetric matrices (n <= 10)", 120) as notes:
        report = V.verify_gram(samples=1000, nmax=10)
        assert report.instances_checked == 1000
        assert report.passed, report.violations[:3]
        notes["msg"] = "bit-exact, even alternating ranks"


@pytest.mark.parametrize("name, fn, kwargs", [
    ("tmr-subadditivity", V.search_tmr_subadditivity, {"nmax": 4}),
    ("c3-conjecture", V.search_c3_conjecture, {"nmax": 5}),
])
def test_searches_complete(acceptance_log, name, fn, kwargs):
    with criterion(acceptance_log, f"search {name} {kwargs} completes exhausted", 600) as notes:
        report = fn(**kwargs)
        assert report.exhausted and report.instances_checked > 0
        notes["msg"] = f"{report.instances_checked} instances, {len(report.hits)} hits"
