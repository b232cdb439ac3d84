"""Command-line front end: exact/heuristic ranking, scoring, benchmarks.

Exit codes: 0 success, 2 unreadable input or bad flags, 3 penalty not
usable for solving, 4 ranking file does not cover the graph.
"""
from __future__ import annotations

import argparse
import sys
import time
from typing import Optional, Sequence

from .canonical import canonical_ranking, distinct_rank_count
from .circulation import dump_state
from .exact import min_agony
from .graph import (
    ParseError,
    VertexTable,
    WeightedDigraph,
    normalize,
    parse_edge_list,
    score_ranking,
)
from .heuristic import heuristic_rank
from .penalties import PenaltySpec, UnsupportedPenaltyError

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_PENALTY = 3
EXIT_RANKING = 4


class _CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _load_graph(path: str) -> tuple[WeightedDigraph, VertexTable]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            g, table = parse_edge_list(fh)
    except OSError as exc:
        raise _CliError(EXIT_INPUT, f"cannot read {path}: {exc}") from exc
    except ParseError as exc:
        raise _CliError(EXIT_INPUT, f"{path}: {exc}") from exc
    return normalize(g), table


def _parse_penalty(text: str) -> PenaltySpec:
    try:
        return PenaltySpec.parse(text)
    except ValueError as exc:
        raise _CliError(EXIT_INPUT, str(exc)) from exc


def _write_ranking(table: VertexTable, ranks: Sequence[int], out: Optional[str]):
    lines = [f"{table.label(v)}\t{ranks[v]}\n" for v in range(len(table))]
    if out is None:
        sys.stdout.write("".join(lines))
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write("".join(lines))


def _summary(command: str, path: str, g: WeightedDigraph, k, penalty, score, ranks, ms, **extra):
    pairs = {
        "command": command,
        "input": path,
        "n": g.n,
        "m": g.m,
        "k": k,
        "penalty": penalty.describe(),
        **extra,
        "score": score,
        "groups": distinct_rank_count(ranks),
        "time_ms": f"{ms:.1f}",
    }
    for key, val in pairs.items():
        print(f"{key}={val}", file=sys.stderr)


def _self_check(g: WeightedDigraph, ranks: Sequence[int], penalty: PenaltySpec, score):
    recomputed = score_ranking(g, ranks, penalty)
    if recomputed != score:
        raise _CliError(1, f"internal error: reported score {score} != recomputed {recomputed}")


def _check_k(k) -> None:
    if k is not None and k < 1:
        raise _CliError(EXIT_INPUT, f"--k must be >= 1, got {k}")


def _cmd_exact(args) -> int:
    g, table = _load_graph(args.input)
    _check_k(args.k)
    penalty = _parse_penalty(args.penalty)
    if not penalty.solvable:
        raise _CliError(EXIT_PENALTY, f"penalty {penalty.describe()!r} supports scoring only")
    k = args.k if args.k is not None else max(g.n, 1)
    use_scc = not args.no_scc
    if use_scc and k < g.n:
        print(f"note: k={k} < n disables the SCC decomposition", file=sys.stderr)
        use_scc = False
    if use_scc and args.canonical and g.n:
        print("note: --canonical solves the full instance (SCC decomposition off)", file=sys.stderr)
        use_scc = False
    t0 = time.perf_counter()
    result = min_agony(g, k, penalty, use_scc=use_scc, solver=args.solver)
    ranks = result.ranks
    if args.canonical and g.n:
        comp = result.components[0]
        if comp.state is None:  # k = 1, trivially canonical
            pass
        else:
            ranks = canonical_ranking(comp.state, comp.sg, comp.local_ranks)
    ms = (time.perf_counter() - t0) * 1e3
    _self_check(g, ranks, penalty, result.agony)
    _write_ranking(table, ranks, args.out)
    if args.dump_state:
        with open(args.dump_state, "w", encoding="utf-8") as fh:
            for comp in result.components:
                if comp.state is not None:
                    dump_state(comp.state, fh)
    _summary(
        "exact", args.input, g, result.k, penalty, result.agony, ranks, ms,
        solver=args.solver, scc=int(result.used_scc), canonical=int(bool(args.canonical)),
    )
    return EXIT_OK


def _cmd_heuristic(args) -> int:
    g, table = _load_graph(args.input)
    _check_k(args.k)
    penalty = PenaltySpec.linear()
    t0 = time.perf_counter()
    ranks, score = heuristic_rank(g, args.k, args.variant)
    ms = (time.perf_counter() - t0) * 1e3
    _self_check(g, ranks, penalty, score)
    _write_ranking(table, ranks, args.out)
    k = args.k if args.k is not None else max(g.n, 1)
    _summary("heuristic", args.input, g, k, penalty, score, ranks, ms, variant=args.variant)
    return EXIT_OK


def _read_ranking(path: str, table: VertexTable) -> list[int]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise _CliError(EXIT_INPUT, f"cannot read {path}: {exc}") from exc
    got: dict[str, int] = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise _CliError(EXIT_INPUT, f"{path} line {lineno}: expected 'label rank'")
        try:
            got[parts[0]] = int(parts[1])
        except ValueError:
            raise _CliError(EXIT_INPUT, f"{path} line {lineno}: rank {parts[1]!r} is not an integer")
    ranks = []
    for v in range(len(table)):
        label = table.label(v)
        if label not in got:
            raise _CliError(EXIT_RANKING, f"vertex {label!r} missing from ranking file")
        ranks.append(got[label])
    extra = set(got) - set(table.labels())
    if extra:
        print(f"warning: ranking file has {len(extra)} label(s) not in the graph", file=sys.stderr)
    return ranks


def _cmd_score(args) -> int:
    g, table = _load_graph(args.input)
    penalty = _parse_penalty(args.penalty)
    ranks = _read_ranking(args.ranking, table)
    print(score_ranking(g, ranks, penalty))
    return EXIT_OK


def _cmd_bench(args) -> int:
    try:
        with open(args.manifest, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise _CliError(EXIT_INPUT, f"cannot read {args.manifest}: {exc}") from exc
    print("dataset\tmethod\tscore\tratio\ttime_s")
    for raw in lines:
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        name, path = parts[0], parts[1]
        k = None
        methods = ["exact", "scc", "plain"]
        for opt in parts[2:]:
            if opt.startswith("k="):
                k = int(opt[2:])
            elif opt.startswith("methods="):
                methods = opt[8:].split(",")
            else:
                raise _CliError(EXIT_INPUT, f"unknown manifest option {opt!r}")
        try:
            g, _ = _load_graph(path)
        except _CliError:
            print(f"{name}\t-\tskipped\t-\t-")
            continue
        optimal = None
        rows = []
        for method in methods:
            t0 = time.perf_counter()
            if method == "exact":
                res = min_agony(g, k)
                score = res.agony
                optimal = score
            elif method in ("plain", "scc", "best"):
                _, score = heuristic_rank(g, k, method)
            else:
                raise _CliError(EXIT_INPUT, f"unknown bench method {method!r}")
            rows.append((method, score, time.perf_counter() - t0))
        for method, score, secs in rows:
            if optimal in (None, 0):
                ratio = "1.000" if score == optimal else "-"
            else:
                ratio = f"{score / optimal:.3f}"
            print(f"{name}\t{method}\t{score}\t{ratio}\t{secs:.2f}")
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="agony",
        description="Discover tiered hierarchies in weighted directed graphs.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("exact", help="optimal ranking via min-cost circulation")
    p.add_argument("input", help="edge-list file: 'source target [weight]' per line")
    p.add_argument("--k", type=int, default=None, help="maximum number of tiers")
    p.add_argument("--penalty", default="linear", help="linear | const | sum:a,b;a,b;...")
    p.add_argument("--no-scc", action="store_true", help="disable SCC decomposition")
    p.add_argument("--solver", choices=("fast", "baseline"), default="fast")
    p.add_argument("--canonical", action="store_true", help="emit the canonical optimal ranking")
    p.add_argument("--out", default=None, help="write ranking here instead of stdout")
    p.add_argument("--dump-state", default=None, help=argparse.SUPPRESS)
    p.set_defaults(func=_cmd_exact)

    p = sub.add_parser("heuristic", help="divide-and-conquer heuristic ranking")
    p.add_argument("input")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--variant", choices=("plain", "scc", "best"), default="best")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_heuristic)

    p = sub.add_parser("score", help="score a ranking file against a graph")
    p.add_argument("input")
    p.add_argument("ranking", help="file of 'label rank' lines covering every vertex")
    p.add_argument("--penalty", default="linear")
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser("bench", help="run a benchmark manifest")
    p.add_argument("manifest", help="lines: name path [k=INT] [methods=exact,scc,plain,best]")
    p.set_defaults(func=_cmd_bench)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except UnsupportedPenaltyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PENALTY


if __name__ == "__main__":
    sys.exit(main())
