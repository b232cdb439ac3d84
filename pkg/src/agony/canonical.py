"""Canonical optimal rankings: pointwise-minimal with the fewest tiers.

Among all optimal rankings there is a unique one that is pointwise <= every
other; it is obtained by subtracting, from any optimal ranking, the shortest
reduced-cost distances from the alpha sentinel in the residual graph of the
solved circulation.
"""
from __future__ import annotations

from heapq import heappop, heappush
from typing import Optional, Sequence

from .circulation import CirculationInstance, ShiftedGraph, SolverError, SolverState


class ResidualView:
    """Residual graph of a solved circulation, weighted by reduced costs.

    Forward arcs carry t(e) + pi(w) - pi(v); each positive-flow arc also
    contributes a reversed arc with the negated expression.  Dual
    feasibility plus slackness make every weight nonnegative, which is
    asserted during construction.
    """

    def __init__(self, inst: CirculationInstance, flow: Sequence[int], pot: Sequence[int]):
        self.n = inst.n
        adj: list[list[tuple[int, int]]] = [[] for _ in range(inst.n)]
        for a in range(inst.m):
            src, dst = inst.asrc[a], inst.adst[a]
            rc = inst.acost[a] + pot[dst] - pot[src]
            if rc < 0:
                raise SolverError(f"negative residual weight {rc} on arc {a}")
            adj[src].append((dst, rc))
            if flow[a] > 0:
                if rc != 0:
                    raise SolverError(f"positive-flow arc {a} is not tight")
                adj[dst].append((src, 0))
        self.adj = adj

    def distances_from(self, source: int) -> list[Optional[int]]:
        dist: list[Optional[int]] = [None] * self.n
        heap = [(0, source)]
        while heap:
            d, v = heappop(heap)
            if dist[v] is not None:
                continue
            dist[v] = d
            for w, rc in self.adj[v]:
                if dist[w] is None:
                    heappush(heap, (d + rc, w))
        return dist


def canonical_ranking(state: SolverState, sg: ShiftedGraph, ranks: Sequence[int]) -> list[int]:
    """Pointwise-minimal optimal ranking derived from a solved state.

    r*(v) = r(v) - d(v) with d the residual shortest distance from alpha.
    The result is optimal, canonical, and its smallest rank is 0.
    """
    view = ResidualView(state.inst, state.flow, state.potentials)
    dist = view.distances_from(sg.alpha)
    out = []
    for v in range(sg.n_original):
        d = dist[v]
        if d is None:
            raise SolverError(f"vertex {v} unreachable from alpha in the residual graph")
        out.append(ranks[v] - d)
    if out:
        if min(out) != 0:
            raise SolverError("canonical ranking does not start at rank 0")
        if min(out) < 0 or max(out) > sg.k - 1:
            raise SolverError("canonical ranking escaped the rank window")
    return out


def distinct_rank_count(ranks: Sequence[int]) -> int:
    """Number of distinct tiers used by a ranking."""
    return len(set(ranks))
