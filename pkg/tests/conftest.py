"""Shared fixtures: random graph generators and independent oracles.

Every oracle here is deliberately naive (enumeration, reachability closure,
longest path) so the fast implementations are checked against something
that cannot share their bugs.
"""
from __future__ import annotations

import itertools
import random
from io import StringIO

import numpy as np
import pytest

from agony.graph import WeightedDigraph, normalize, parse_edge_list, score_ranking
from agony.penalties import LINEAR


def random_graph(rng: random.Random, n: int, p: float, wmax: int = 1) -> WeightedDigraph:
    edges = [
        (u, v, rng.randint(1, wmax))
        for u in range(n)
        for v in range(n)
        if u != v and rng.random() < p
    ]
    return WeightedDigraph(n, edges)


def random_dag(rng: random.Random, n: int, p: float, wmax: int = 1) -> WeightedDigraph:
    edges = [
        (u, v, rng.randint(1, wmax))
        for u in range(n)
        for v in range(u + 1, n)
        if rng.random() < p
    ]
    return WeightedDigraph(n, edges)


def graph_from_text(text: str) -> WeightedDigraph:
    g, _ = parse_edge_list(StringIO(text))
    return normalize(g)


def brute_min_linear(g: WeightedDigraph, k: int) -> int:
    """Exhaustive linear-agony minimum over all k^n assignments (vectorized)."""
    n = g.n
    if n == 0:
        return 0
    count = k**n
    base = (np.arange(count, dtype=np.int64)[:, None] // (k ** np.arange(n, dtype=np.int64))) % k
    base = base.astype(np.int32)
    total = np.zeros(count, dtype=np.int64)
    for u, v, w in g.edges:
        d = base[:, u] - base[:, v] + 1
        np.clip(d, 0, None, out=d)
        total += w * d.astype(np.int64)
    return int(total.min())


def brute_optima(g: WeightedDigraph, k: int, penalty=LINEAR):
    """Exhaustive (best score, list of optimal assignments); small n only."""
    best = None
    optima: list[tuple[int, ...]] = []
    for r in itertools.product(range(k), repeat=g.n):
        s = score_ranking(g, r, penalty)
        if best is None or s < best:
            best, optima = s, [r]
        elif s == best:
            optima.append(r)
    return best, optima


def reachability_sccs(g: WeightedDigraph) -> list[frozenset]:
    """SCC membership by pairwise mutual reachability (transitive closure)."""
    n = g.n
    reach = [[False] * n for _ in range(n)]
    for v in range(n):
        reach[v][v] = True
    for u, v, _ in g.edges:
        reach[u][v] = True
    for mid in range(n):
        for a in range(n):
            if reach[a][mid]:
                row_a, row_m = reach[a], reach[mid]
                for b in range(n):
                    if row_m[b]:
                        row_a[b] = True
    comps = []
    assigned = [False] * n
    for v in range(n):
        if assigned[v]:
            continue
        comp = frozenset(w for w in range(n) if reach[v][w] and reach[w][v])
        for w in comp:
            assigned[w] = True
        comps.append(comp)
    return comps


def longest_path_layer_count(g: WeightedDigraph) -> int:
    """1 + longest path length in the condensation DAG (DP oracle)."""
    comps = reachability_sccs(g)
    comp_of = {}
    for i, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = i
    succ = [set() for _ in comps]
    for u, v, _ in g.edges:
        if comp_of[u] != comp_of[v]:
            succ[comp_of[u]].add(comp_of[v])
    depth = {}

    def dfs(c):
        if c in depth:
            return depth[c]
        depth[c] = 0
        best = 0
        for d in succ[c]:
            best = max(best, 1 + dfs(d))
        depth[c] = best
        return best

    if not comps:
        return 0
    return 1 + max(dfs(c) for c in range(len(comps)))


@pytest.fixture
def rng():
    return random.Random(0xA60)
