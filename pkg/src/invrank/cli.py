"""Command-line interface.

Exit status: 0 success, 1 computational limit (or a replayed record that
no longer reproduces), 2 usage error, 3 a verify/search run found
violations or hits.
"""

from __future__ import annotations

import argparse
import inspect
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from pathlib import Path

from . import verification
from .complementation import adjacency_matrix, c2_oracle, min_rank, system_from_matrix
from .errors import FormatError, LimitExceeded
from .inversion import inv, tmr
from .structures import (Digraph, Graph, enumerate_tournaments, format_compact, format_digraph, kjoin,
                         members, parse_compact, parse_digraph_text, parse_graph_text)

EXIT_OK, EXIT_LIMIT, EXIT_USAGE, EXIT_FOUND = 0, 1, 2, 3

# JSON Schema of `inv --json`
INV_RESULT_SCHEMA = {
    "type": "object",
    "required": ["value", "method", "certificate", "tmr", "classified"],
    "additionalProperties": False,
    "properties": {
        "value": {"type": "integer", "minimum": 0},
        "method": {"enum": ["bfs", "rank"]},
        "certificate": {"type": "array", "items": {"type": "array", "items": {"type": "integer", "minimum": 0}}},
        "tmr": {"type": ["integer", "null"], "minimum": 0},
        "classified": {"type": "boolean"},
    },
}


class UsageError(Exception):
    pass


def parse_digraph(text: str) -> Digraph:
    """Parse either the ``digraph <n>`` edge list or a ``t:<n>:<hex>`` tournament."""
    stripped = text.strip()
    if stripped.startswith("t:"):
        return parse_compact(stripped)
    return parse_digraph_text(text)


def _read_source(arg: str) -> str:
    if arg == "-":
        return sys.stdin.read()
    path = Path(arg)
    if not path.is_file():
        raise UsageError(f"no such file: {arg}")
    return path.read_text()


def _load_digraph(arg: str, fmt: str = "auto") -> Digraph:
    if fmt == "compact" or (fmt == "auto" and arg.startswith("t:")):
        return parse_compact(arg)
    text = _read_source(arg)
    return parse_digraph_text(text) if fmt == "digraph" else parse_digraph(text)


def _load_graph(arg: str) -> Graph:
    return parse_graph_text(_read_source(arg))


def _fmt_family(fam) -> str:
    return " ".join("{" + ",".join(map(str, members(X))) + "}" for X in fam) or "(empty)"


def _emit(args, data: dict, text: str) -> None:
    if args.json:
        print(json.dumps(data, indent=2))
    else:
        print(text)


# ---------------------------------------------------------------------------
# verbs


def cmd_inv(args) -> int:
    D = _load_digraph(args.input, args.format)
    res = inv(D, method=args.method)
    text = f"inv = {res.value} ({res.method} engine"
    text += f", tmr = {res.tmr})" if res.tmr is not None else ")"
    text += f"\ncertificate: {_fmt_family(res.certificate)}"
    _emit(args, res.to_dict(), text)
    return EXIT_OK


def cmd_tmr(args) -> int:
    D = _load_digraph(args.input, args.format)
    out = tmr(D, classify=args.classify)
    text = f"tmr = {out.tmr}\nwitness order: {list(out.witness[0])}, diagonal: {members(out.witness[1])}"
    if out.classified:
        text += f"\nall minimum-rank achievers zero-diagonal: {out.all_achievers_zero_diag}"
        text += f"\ninv = {out.inv_value}"
    _emit(args, out.to_dict(), text)
    return EXIT_OK


def cmd_mr(args) -> int:
    G = _load_graph(args.input)
    out = min_rank(G)
    data = out.to_dict()
    data["achievers"] = [members(d) for d in out.achievers]
    text = (f"mr = {out.rank}\nachievers: {out.count}\nunique: {out.unique}"
            f"\nzero diagonal unique: {out.zero_diag_unique}")
    _emit(args, data, text)
    return EXIT_OK


def cmd_c2(args) -> int:
    G = _load_graph(args.input)
    if args.oracle:
        value, fam = c2_oracle(G)
    else:
        out = min_rank(G)
        nonzero = next((d for d in out.achievers if d), None)
        diag = out.achievers[0] if nonzero is None else nonzero
        fam = () if G.is_empty() else system_from_matrix(G, adjacency_matrix(G, diag))
        value = len(fam)
    data = {"value": value, "system": [members(X) for X in fam]}
    _emit(args, data, f"c2 = {value}\nsystem: {_fmt_family(fam)}")
    return EXIT_OK


def _write_digraph(args, D: Digraph) -> None:
    text = format_compact(D) + "\n" if args.compact else format_digraph(D)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_dijoin(args) -> int:
    _write_digraph(args, kjoin([_load_digraph(args.first), _load_digraph(args.second)]))
    return EXIT_OK


def cmd_kjoin(args) -> int:
    _write_digraph(args, kjoin([_load_digraph(a) for a in args.inputs]))
    return EXIT_OK


def cmd_enumerate(args) -> int:
    for T in enumerate_tournaments(args.n, canonical=args.canonical, start=args.start, stop=args.stop):
        print(format_compact(T))
    return EXIT_OK


_SUITE_OPTIONS = ("n", "n1", "n2", "trials", "samples", "nmax", "kmax", "seed", "d2max")


def _kwargs_for(fn, args) -> dict:
    params = inspect.signature(fn).parameters
    return {k: getattr(args, k) for k in _SUITE_OPTIONS if k in params and getattr(args, k) is not None}


def _sharded(fn, kwargs: dict, jobs: int, merge):
    if jobs <= 1:
        return fn(**kwargs)
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        parts = list(pool.map(partial(_call_shard, fn, kwargs, jobs), range(jobs)))
    return merge(parts)


def _call_shard(fn, kwargs, jobs, i):
    return fn(shard=(i, jobs), **kwargs)


def _finish_report(args, report, found: bool, summary: str) -> int:
    if args.output:
        verification.save_report(report, args.output)
    if args.json:
        print(json.dumps(report.to_dict(), indent=2))
    else:
        print(summary)
    return EXIT_FOUND if found else EXIT_OK


def cmd_verify(args) -> int:
    fn = verification.SUITES[args.suite]
    kwargs = _kwargs_for(fn, args)
    missing = [name for name, p in inspect.signature(fn).parameters.items()
               if p.default is inspect.Parameter.empty and name not in kwargs]
    if missing:
        raise UsageError(f"suite {args.suite} needs --{' --'.join(missing)}")
    report = _sharded(fn, kwargs, args.jobs, verification.merge_suite_reports)
    status = "PASS" if report.passed else "FAIL"
    summary = (f"{report.suite}: {status} ({report.instances_checked} instances, "
               f"{len(report.violations)} violations, {report.runtime:.2f}s)")
    for v in report.violations[:10]:
        summary += f"\n  violation #{v['index']}: {json.dumps(v['detail'])} on {json.dumps(v['instance'])}"
    return _finish_report(args, report, not report.passed, summary)


def cmd_search(args) -> int:
    fn = verification.SEARCHES[args.question]
    kwargs = _kwargs_for(fn, args)
    kwargs.setdefault("nmax", 4)
    report = _sharded(fn, kwargs, args.jobs, verification.merge_search_reports)
    summary = (f"{report.question}: {len(report.hits)} hits in {report.instances_checked} instances"
               f" ({'exhausted' if report.exhausted else 'partial'}; {report.space_description})")
    for h in report.hits[:10]:
        summary += f"\n  hit #{h['index']}: {json.dumps(h['data'])} on {json.dumps(h['instance'])}"
    for note in report.notes:
        summary += f"\n  note: {note}"
    return _finish_report(args, report, bool(report.hits), summary)


def cmd_replay(args) -> int:
    if not Path(args.report).is_file():
        raise UsageError(f"no such file: {args.report}")
    try:
        report = verification.load_report(args.report, verify=True)
    except ValueError as exc:
        print(f"replay failed: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    records = report.violations if isinstance(report, verification.SuiteReport) else report.hits
    name = getattr(report, "suite", None) or report.question
    print(f"{name}: {len(records)} records reproduced")
    return EXIT_FOUND if records else EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="invrank", description="Exact inversion numbers of oriented graphs.")
    sub = parser.add_subparsers(dest="verb", required=True)

    def add_json(p):
        p.add_argument("--json", action="store_true", help="emit JSON")

    p = sub.add_parser("inv", help="inversion number with certificate")
    p.add_argument("input", help="digraph file, '-' for stdin, or t:<n>:<hex>")
    p.add_argument("--format", choices=["auto", "digraph", "compact"], default="auto")
    p.add_argument("--method", choices=["auto", "bfs", "rank"], default="auto")
    add_json(p)
    p.set_defaults(func=cmd_inv)

    p = sub.add_parser("tmr", help="tournament minimum rank")
    p.add_argument("input")
    p.add_argument("--format", choices=["auto", "digraph", "compact"], default="auto")
    p.add_argument("--classify", action="store_true", help="also decide inv via the diagonal test")
    add_json(p)
    p.set_defaults(func=cmd_tmr)

    p = sub.add_parser("mr", help="minimum rank of a graph over GF(2)")
    p.add_argument("input", help="graph file or '-'")
    add_json(p)
    p.set_defaults(func=cmd_mr)

    p = sub.add_parser("c2", help="subgraph complementation number")
    p.add_argument("input", help="graph file or '-'")
    p.add_argument("--oracle", action="store_true", help="use breadth-first search instead of minimum rank")
    add_json(p)
    p.set_defaults(func=cmd_c2)

    for verb, helptext in (("dijoin", "dijoin of two digraphs"), ("kjoin", "k-join of several digraphs")):
        p = sub.add_parser(verb, help=helptext)
        if verb == "dijoin":
            p.add_argument("first")
            p.add_argument("second")
        else:
            p.add_argument("inputs", nargs="+")
        p.add_argument("-o", "--output")
        p.add_argument("--compact", action="store_true", help="write t:<n>:<hex> (tournaments only)")
        p.set_defaults(func=cmd_dijoin if verb == "dijoin" else cmd_kjoin)

    p = sub.add_parser("enumerate", help="list tournaments in compact format")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--canonical", action="store_true")
    p.add_argument("--start", type=int, default=0)
    p.add_argument("--stop", type=int)
    p.set_defaults(func=cmd_enumerate)

    def add_report_opts(p):
        for name in _SUITE_OPTIONS:
            p.add_argument(f"--{name}", type=int)
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("-o", "--output", help="write the JSON report here")
        add_json(p)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=sorted(verification.SUITES))
    add_report_opts(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search", help="run an open-question search")
    p.add_argument("question", choices=sorted(verification.SEARCHES))
    add_report_opts(p)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("replay", help="re-verify a saved report")
    p.add_argument("report")
    p.set_defaults(func=cmd_replay)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, FormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except LimitExceeded as exc:
        print(f"limit exceeded: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
