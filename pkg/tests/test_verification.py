import json

import pytest

from invrank import verification as V
from invrank.inversion import tmr_exhaustive
from invrank.structures import cycle3, dijoin, format_compact, transitive_tournament

C3 = cycle3()


@pytest.mark.parametrize("fn, kwargs, instances", [
    (V.verify_theorem_main, {"n1": 3, "n2": 3}, 1),
    (V.verify_theorem_main, {"n1": 3, "n2": 4}, 4),
    (V.verify_cor_tmr, {"n": 3}, 8),
    (V.verify_cor_tmr, {"n": 4}, 64),
    (V.verify_cor_tmr, {"n": 6, "samples": 15}, 15),
    (V.verify_lemma_staircase, {"trials": 500}, 500),
    (V.verify_kjoin_c3, {"kmax": 2}, 2),
    (V.verify_props, {"n": 5, "samples": 60}, 60),
    (V.verify_engines, {"n": 4}, 64),
    (V.verify_engines, {"n": 6, "samples": 10}, 10),
    (V.verify_lemma_minrank, {"n": 4}, 64),
    (V.verify_certificates, {"samples": 60}, 60),
    (V.verify_gram, {"samples": 200}, 200),
])
def test_suites_pass(fn, kwargs, instances):
    report = fn(**kwargs)
    assert report.passed, report.violations[:3]
    assert report.instances_checked == instances


def test_theorem_main_pairs():
    # up to 4 vertices every non-transitive class (C3 and three others) has inv 1
    report = V.verify_theorem_main(4, 4)
    assert report.passed and report.instances_checked == 16


def test_single_inversion_check_finds_decycling_sets():
    assert V._single_inversion_decycles(C3) is not None
    assert V._single_inversion_decycles(dijoin(C3, C3)) is None


def test_staircase_degenerate_cases():
    from invrank.gf2linalg import Gf2Matrix, block_compose, staircase_conclusion

    for m in range(1, 5):
        for n in range(1, 4):
            M = block_compose(Gf2Matrix.zeros(n), Gf2Matrix.zeros(m), Gf2Matrix.zeros(n, m))
            assert staircase_conclusion(M, n, m)
    ones = block_compose(Gf2Matrix.identity(1), Gf2Matrix.from_lists([[1, 1], [1, 1]]),
                         Gf2Matrix.from_lists([[1, 1]]))
    assert staircase_conclusion(ones, 1, 2)


def test_props_examples():
    from invrank.structures import Digraph, format_digraph, twins

    with_sink = Digraph.from_edges(4, [(0, 1), (1, 2), (2, 0), (0, 3), (1, 3), (2, 3)])
    assert V._check_props({"digraph": format_digraph(with_sink)}) == []
    assert twins(C3) == []
    assert V._check_props({"digraph": format_digraph(C3)}) == []


def test_seeded_determinism():
    a = V.verify_props(n=4, samples=20, seed=5)
    b = V.verify_props(n=4, samples=20, seed=5)
    assert a.seed == 5 and a.to_dict()["params"] == b.to_dict()["params"]
    assert V.prop_instances(4, 20, 5) == V.prop_instances(4, 20, 5)
    assert V.prop_instances(4, 20, 5) != V.prop_instances(4, 20, 6)


@pytest.mark.parametrize("k", [2, 3])
def test_sharding_matches_single_run(k):
    whole = V.verify_props(n=5, samples=30, seed=9)
    parts = [V.verify_props(n=5, samples=30, seed=9, shard=(i, k)) for i in range(k)]
    merged = V.merge_suite_reports(parts)
    assert merged.instances_checked == whole.instances_checked
    assert merged.violations == whole.violations
    parts = [V.search_c3_conjecture(4, shard=(i, k)) for i in range(k)]
    merged = V.merge_search_reports(parts[::-1])
    single = V.search_c3_conjecture(4)
    assert merged.hits == single.hits and merged.instances_checked == single.instances_checked


def test_search_pairs():
    report = V.search_inv_eq_tmr_pairs(2)
    assert report.exhausted and report.hits == [] and report.instances_checked == 0
    c3 = format_compact(C3)
    assert V._probe_inv_eq_tmr_pair({"d1": c3, "d2": c3, "inv1": 1, "inv2": 1}) is None
    report = V.search_inv_eq_tmr_pairs(4)
    assert report.exhausted and report.hits == [] and report.instances_checked == 16


def test_search_subadditivity():
    for a in range(1, 4):
        for b in range(1, 4):
            p = {"d1": format_compact(transitive_tournament(a)), "d2": format_compact(transitive_tournament(b))}
            assert V._probe_tmr_subadditivity(p) is None
    c3 = format_compact(C3)
    assert V._probe_tmr_subadditivity({"d1": c3, "d2": c3}) is None
    report = V.search_tmr_subadditivity(3)
    assert report.exhausted and report.instances_checked == 16


def test_search_c3():
    TT2 = transitive_tournament(2)
    assert V._probe_c3({"d": format_compact(TT2)}) is None
    assert tmr_exhaustive(dijoin(TT2, C3)).tmr == 1 == tmr_exhaustive(dijoin(C3, TT2)).tmr
    assert V._probe_c3({"d": format_compact(C3)}) is None
    assert tmr_exhaustive(dijoin(C3, C3)).tmr == 2


def test_search_plus_one():
    report = V.search_inv_eq_tmr_plus_one(4, d2max=3)
    assert report.exhausted and report.hits == [] and report.notes
    for n in range(1, 6):
        assert V._probe_inv_eq_tmr_plus_one({"d": format_compact(transitive_tournament(n)), "d2max": 3}) is None


def test_claim_block_ranks_c3_pair():
    rows = V.dijoin_block_ranks(C3, C3)
    assert len(rows) == 9
    k = 1
    for row in rows:
        assert row["rank"] == 2
        assert row["rank_a"] in (k - 1, k) and row["rank_b"] in (k - 1, k)
        assert row["staircase"] and row["nonzero_diag"]


def test_report_round_trip(tmp_path):
    report = V.verify_cor_tmr(3)
    path = tmp_path / "r.json"
    V.save_report(report, path)
    data = json.loads(path.read_text())
    assert data["type"] == "suite" and data["passed"] and data["instances_checked"] == 8
    loaded = V.load_report(path)
    assert loaded.to_dict() == report.to_dict()
    search = V.search_c3_conjecture(3)
    V.save_report(search, path)
    assert V.load_report(path).to_dict() == search.to_dict()


@pytest.fixture
def fake_kinds(monkeypatch):
    monkeypatch.setitem(V.CHECKS, "odd", lambda p: [{"odd": p["x"]}] if p["x"] % 2 else [])
    monkeypatch.setitem(V.PROBES, "big", lambda p: {"x": p["x"]} if p["x"] > 2 else None)


def test_records_are_sealed_and_replayed(fake_kinds, tmp_path):
    count, viol = V._run("odd", [{"x": x} for x in range(5)], (0, 1))
    assert count == 5 and [v["index"] for v in viol] == [1, 3]
    assert all(v["reproduced"] for v in viol)
    report = V.SuiteReport("fake", {}, None, count, viol, 0.0)
    assert not report.passed
    path = tmp_path / "fake.json"
    V.save_report(report, path)
    assert len(V.load_report(path).violations) == 2

    data = json.loads(path.read_text())
    data["violations"][0]["detail"] = {"odd": 99}
    path.write_text(json.dumps(data))
    with pytest.raises(ValueError):
        V.load_report(path)
    assert V.load_report(path, verify=False)

    count, hits = V._search("big", [{"x": x} for x in range(5)], (1, 2))
    assert count == 2 and [h["index"] for h in hits] == [3]
    assert V.recheck_record(hits[0])


def test_recheck_unknown_kind():
    with pytest.raises(ValueError):
        V.recheck_record({"kind": "nope"})
    with pytest.raises(ValueError):
        V.report_from_dict({"type": "other"})
