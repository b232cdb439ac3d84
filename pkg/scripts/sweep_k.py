#!/usr/bin/env python3
"""Sweep the tier budget k and emit a CSV of scores and running times.

Columns: k, exact score, plain heuristic score, scc heuristic score,
exact seconds.  Mirrors the score-versus-k and heuristic-ratio curves of
the experiment section without any plotting dependencies.

Usage: python scripts/sweep_k.py EDGELIST [KMAX] > sweep.csv
"""
import sys
import time

from agony.exact import min_agony
from agony.graph import normalize, parse_edge_list
from agony.heuristic import heuristic_rank


def main() -> int:
    if len(sys.argv) < 2:
        print(__doc__, file=sys.stderr)
        return 2
    with open(sys.argv[1], "r", encoding="utf-8") as fh:
        g, _ = parse_edge_list(fh)
    g = normalize(g)
    kmax = int(sys.argv[2]) if len(sys.argv) > 2 else g.n
    print("k,exact,plain,scc,exact_seconds")
    for k in range(2, kmax + 1):
        t0 = time.perf_counter()
        exact = min_agony(g, k).agony
        secs = time.perf_counter() - t0
        _, plain = heuristic_rank(g, k, "plain")
        _, scc = heuristic_rank(g, k, "scc")
        print(f"{k},{exact},{plain},{scc},{secs:.3f}")
        if exact == 0:
            break
    return 0


if __name__ == "__main__":
    sys.exit(main())
