import json
import subprocess
import sys

import jsonschema
import pytest

from invrank.cli import INV_RESULT_SCHEMA, parse_digraph, run
from invrank.errors import FormatError
from invrank.inversion import check_decycling
from invrank.structures import (Graph, cycle3, dijoin, format_compact, format_digraph, format_graph, kjoin,
                                parse_compact, parse_digraph_text, transitive_tournament, vset)

C3 = cycle3()


@pytest.fixture
def files(tmp_path):
    c3 = tmp_path / "c3.dg"
    c3.write_text(format_digraph(C3))
    cyc = tmp_path / "cyc.dg"
    cyc.write_text("digraph 4\n0 1\n1 2\n2 0\n2 3\n")
    k2 = tmp_path / "k2.g"
    k2.write_text(format_graph(Graph.complete(2)))
    wheel = tmp_path / "wheel.g"
    wheel.write_text("graph 5\n0 1\n0 2\n0 3\n0 4\n1 3\n1 4\n2 3\n2 4\n")
    return tmp_path


def out_of(capsys, argv):
    code = run(argv)
    return code, capsys.readouterr()


def test_inv_compact_literal(capsys):
    # t:3:4 is a 3-cycle under the left-aligned big-endian pair encoding
    assert not check_decycling(parse_compact("t:3:4"), ())
    code, io = out_of(capsys, ["inv", "--format", "compact", "t:3:4"])
    assert code == 0
    assert "inv = 1" in io.out and "certificate: {" in io.out


def test_inv_json_schema(capsys, files):
    for argv in (["inv", "t:3:4", "--json"], ["inv", str(files / "cyc.dg"), "--json"],
                 ["inv", str(files / "c3.dg"), "--json", "--method", "bfs"]):
        code, io = out_of(capsys, argv)
        assert code == 0
        data = json.loads(io.out)
        jsonschema.validate(data, INV_RESULT_SCHEMA)
        D = parse_compact("t:3:4") if "t:3:4" in argv else parse_digraph_text(open(argv[1]).read())
        assert check_decycling(D, [vset(s) for s in data["certificate"]])
        assert len(data["certificate"]) == data["value"] == 1


def test_inv_stdin(monkeypatch, capsys):
    import io as _io

    monkeypatch.setattr(sys, "stdin", _io.StringIO("digraph 3\n0 1\n1 2\n2 0\n"))
    code, io = out_of(capsys, ["inv", "-"])
    assert code == 0 and "inv = 1" in io.out


def test_usage_errors(capsys, files):
    assert run(["inv", "nonexistent.dg"]) == 2
    assert run([]) == 2
    assert run(["inv", str(files / "c3.dg"), "--bogus"]) == 2
    assert run(["frobnicate"]) == 2
    assert run(["inv", str(files / "cyc.dg"), "--method", "rank"]) == 2
    bad = files / "bad.dg"
    bad.write_text("digraph 2\n0 1\n1 0\n")
    code, io = out_of(capsys, ["inv", str(bad)])
    assert code == 2 and "line 3" in io.err
    assert run(["inv", "--format", "compact", "t:3:q"]) == 2
    assert run(["verify", "theorem-main"]) == 2


def test_limit_exit(capsys):
    big = format_compact(dijoin(C3, transitive_tournament(5)))
    code, io = out_of(capsys, ["inv", big, "--method", "bfs"])
    assert code == 1 and "limit" in io.err
    code, _ = out_of(capsys, ["tmr", format_compact(kjoin([C3] * 4))])
    assert code == 1


def test_tmr_verb(capsys):
    code, io = out_of(capsys, ["tmr", format_compact(dijoin(C3, C3)), "--classify", "--json"])
    data = json.loads(io.out)
    assert code == 0 and (data["tmr"], data["inv_value"]) == (2, 2)
    code, io = out_of(capsys, ["tmr", "t:3:4"])
    assert code == 0 and "tmr = 1" in io.out


def test_mr_and_c2(capsys, files):
    code, io = out_of(capsys, ["mr", str(files / "k2.g"), "--json"])
    data = json.loads(io.out)
    assert code == 0 and data["rank"] == 1 and data["achievers"] == [[0, 1]]
    for extra in ([], ["--oracle"]):
        code, io = out_of(capsys, ["c2", str(files / "wheel.g"), "--json", *extra])
        data = json.loads(io.out)
        assert code == 0 and data["value"] == 3 and len(data["system"]) == 3


def test_dijoin_kjoin(capsys, files, tmp_path):
    out = tmp_path / "j.dg"
    assert run(["dijoin", str(files / "c3.dg"), str(files / "c3.dg"), "-o", str(out)]) == 0
    assert parse_digraph_text(out.read_text()) == dijoin(C3, C3)
    code, io = out_of(capsys, ["kjoin", "t:3:4", "t:3:4", "t:3:4", "--compact"])
    assert code == 0
    assert parse_compact(io.out.strip()) == kjoin([parse_compact("t:3:4")] * 3)


def test_enumerate(capsys):
    code, io = out_of(capsys, ["enumerate", "--n", "4", "--canonical"])
    lines = io.out.split()
    assert code == 0 and len(lines) == 4
    assert all(parse_compact(s).is_tournament() for s in lines)
    code, io = out_of(capsys, ["enumerate", "--n", "3", "--start", "2", "--stop", "5"])
    assert len(io.out.split()) == 3


def test_verify_and_replay(capsys, tmp_path):
    code, io = out_of(capsys, ["verify", "cor-tmr", "--n", "4"])
    assert code == 0 and "PASS" in io.out and "64 instances" in io.out
    report = tmp_path / "rep.json"
    code, io = out_of(capsys, ["verify", "props", "--n", "4", "--samples", "12", "--jobs", "2",
                               "-o", str(report), "--json"])
    data = json.loads(io.out)
    assert code == 0 and data["instances_checked"] == 12 and data["passed"]
    assert run(["replay", str(report)]) == 0
    assert run(["replay", str(tmp_path / "missing.json")]) == 2


def test_discoveries_exit_3(capsys, tmp_path, monkeypatch):
    from invrank import verification as V

    monkeypatch.setitem(V.CHECKS, "always", lambda p: [{"seen": p["x"]}])

    def fake_suite(samples=2, shard=(0, 1)):
        count, viol = V._run("always", [{"x": x} for x in range(samples)], shard)
        return V.SuiteReport("fake", {"samples": samples}, None, count, viol, 0.0)

    monkeypatch.setitem(V.SUITES, "fake", fake_suite)
    path = tmp_path / "fake.json"
    code, io = out_of(capsys, ["verify", "fake", "--samples", "3", "-o", str(path)])
    assert code == 3 and "FAIL" in io.out
    assert run(["replay", str(path)]) == 3


def test_replay_exit_codes(capsys, tmp_path):
    # a stored record that no longer reproduces: exit 1
    record = {"kind": "engines", "index": 0, "instance": {"d": "t:3:4"}, "detail": {"bfs": 1, "rank": 2}}
    rep = {"type": "suite", "suite": "engines", "params": {}, "seed": None, "instances_checked": 1,
           "violations": [record], "runtime": 0.0}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(rep))
    code, io = out_of(capsys, ["replay", str(path)])
    assert code == 1 and "do not reproduce" in io.err


def test_search(capsys, tmp_path):
    path = tmp_path / "s.json"
    code, io = out_of(capsys, ["search", "c3-conjecture", "--nmax", "4", "-o", str(path)])
    assert code == 0 and "0 hits" in io.out and "exhausted" in io.out
    code, _ = out_of(capsys, ["replay", str(path)])
    assert code == 0
    code, io = out_of(capsys, ["search", "inv-eq-tmr-plus-one", "--nmax", "4", "--d2max", "3", "--json"])
    data = json.loads(io.out)
    assert code == 0 and data["exhausted"] and data["hits"] == []


def test_parse_digraph():
    assert parse_digraph("digraph 3\n0 1\n1 2\n2 0") == C3
    with pytest.raises(FormatError):
        parse_digraph("digraph 2\n0 1\n1 0")
    assert parse_digraph(format_digraph(C3)) == C3
    assert parse_digraph(format_compact(C3)) == C3
    assert parse_digraph("# comment\ndigraph 3\n0 1\n\n1 2\n2 0\n") == C3


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "invrank.cli", "inv", "t:3:4"], capture_output=True, text=True)
    assert proc.returncode == 0 and "inv = 1" in proc.stdout
