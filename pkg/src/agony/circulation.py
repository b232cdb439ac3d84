"""Min-cost circulation machinery behind exact agony minimization.

The pipeline: a weighted digraph plus a tier budget k becomes a shifted-arc
graph (``build_agony_instance`` / ``build_convex_instance``), capacitated
arcs are replaced by negative-bias gadget vertices (``uncapacitate``), and
the resulting uncapacitated instance is solved by delta-scaling successive
shortest paths (``solve_baseline``) or by the multi-source variant with
dynamic shortest-path-tree repair (``solve_fast``).  Optimal integer duals
turn back into a rank assignment via ``extract_ranking``.

No floating point anywhere: distances are lexicographic (cost, hops) pairs,
which is equivalent to perturbing every arc by an epsilon smaller than 1/n,
and all comparisons against the 3/4 excess threshold are cross-multiplied.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from heapq import heapify, heappop, heappush
from typing import Optional, TextIO

from .graph import WeightedDigraph
from .penalties import PenaltySpec, UnsupportedPenaltyError

# excess threshold alpha = 3/4: a vertex is a source when 4*e(v) >= 3*delta
_ALPHA_NUM = 3
_ALPHA_DEN = 4


class SolverError(RuntimeError):
    """Internal invariant violation; indicates a solver bug, never silent."""


@dataclass(frozen=True)
class ShiftedArc:
    src: int
    dst: int
    weight: Optional[int]  # None means uncapacitated
    shift: int


@dataclass(frozen=True)
class ShiftedGraph:
    """Shifted-penalty graph: minimize sum w(e) * max(r(u) - r(v) + s(e), 0).

    Contains the original vertices 0..n_original-1 plus the two sentinels
    ``alpha`` and ``omega`` whose fan arcs pin every rank into [0, k-1].
    """

    n_original: int
    alpha: int
    omega: int
    k: int
    scale: int
    arcs: tuple[ShiftedArc, ...]

    @property
    def n_total(self) -> int:
        return self.n_original + 2

    @property
    def score_offset(self) -> int:
        """sum of s(e)*w(e) over finite arcs with positive shift.

        The optimal shifted score equals this offset minus the minimal cost
        of the uncapacitated circulation.
        """
        return sum(a.shift * a.weight for a in self.arcs if a.weight is not None and a.shift > 0)


def build_convex_instance(g: WeightedDigraph, k: int, penalty: PenaltySpec) -> ShiftedGraph:
    """Encode constrained minimization of a convex hinge-sum penalty.

    Every input edge e becomes one capacitated arc per hinge term, with
    shift -b_i and weight a_i * w(e) (slopes pre-scaled to integers); the
    sentinel fans and the (omega, alpha) arc with shift 1-k enforce the
    cardinality constraint.
    """
    if not penalty.solvable:
        raise UnsupportedPenaltyError(
            f"penalty kind {penalty.kind!r} cannot be minimized, only scored"
        )
    if k < 2:
        raise ValueError(f"cardinality constraint k must be >= 2, got {k}")
    terms = penalty.integer_terms()
    n = g.n
    alpha, omega = n, n + 1
    arcs: list[ShiftedArc] = []
    for u, v, w in g.edges:
        for a_int, b in terms:
            arcs.append(ShiftedArc(u, v, a_int * w, -b))
    for v in range(n):
        arcs.append(ShiftedArc(alpha, v, None, 0))
        arcs.append(ShiftedArc(v, omega, None, 0))
    arcs.append(ShiftedArc(omega, alpha, None, 1 - k))
    return ShiftedGraph(n, alpha, omega, k, penalty.scale, tuple(arcs))


def build_agony_instance(g: WeightedDigraph, k: int) -> ShiftedGraph:
    """Encode plain agony: one arc per edge with shift 1 and the sentinels."""
    return build_convex_instance(g, k, PenaltySpec.linear())


class CirculationInstance:
    """Uncapacitated min-cost circulation with vertex biases.

    Vertices 0..n_w1-1 are the shifted graph's vertices; the rest encode one
    capacitated arc each (two incoming cost-split arcs, bias -capacity).
    """

    __slots__ = (
        "n", "n_w1", "asrc", "adst", "acost", "bias",
        "out_arcs", "in_arcs", "w2_origin", "k", "shifted",
    )

    def __init__(self, n_w1: int, k: Optional[int] = None):
        self.n = n_w1
        self.n_w1 = n_w1
        self.asrc: list[int] = []
        self.adst: list[int] = []
        self.acost: list[int] = []
        self.bias: list[int] = [0] * n_w1
        self.w2_origin: list[int] = []
        self.k = k
        self.shifted: Optional[ShiftedGraph] = None
        self.out_arcs: list[list[int]] = []
        self.in_arcs: list[list[int]] = []

    @property
    def m(self) -> int:
        return len(self.asrc)

    def _add_vertex(self) -> int:
        v = self.n
        self.n += 1
        self.bias.append(0)
        return v

    def _add_arc(self, src: int, dst: int, cost: int) -> int:
        a = len(self.asrc)
        self.asrc.append(src)
        self.adst.append(dst)
        self.acost.append(cost)
        return a

    def _build_adjacency(self):
        out = [[] for _ in range(self.n)]
        inn = [[] for _ in range(self.n)]
        for a in range(self.m):
            out[self.asrc[a]].append(a)
            inn[self.adst[a]].append(a)
        self.out_arcs = out
        self.in_arcs = inn


def uncapacitate(sg: ShiftedGraph) -> CirculationInstance:
    """Replace each capacitated arc (v, w) by a gadget vertex u.

    Arcs (v, u) with cost max(-s, 0) and (w, u) with cost max(s, 0) meet at
    u with bias -c(e), while b(w) grows by c(e); uncapacitated arcs become
    plain arcs with cost -s.  Biases sum to zero and all costs are >= 0, so
    the zero flow with zero duals is dual-feasible and slack.
    """
    inst = CirculationInstance(sg.n_total, k=sg.k)
    inst.shifted = sg
    for idx, arc in enumerate(sg.arcs):
        if arc.weight is None:
            inst._add_arc(arc.src, arc.dst, -arc.shift)
        else:
            u = inst._add_vertex()
            inst.w2_origin.append(idx)
            inst._add_arc(arc.src, u, max(-arc.shift, 0))
            inst._add_arc(arc.dst, u, max(arc.shift, 0))
            inst.bias[u] -= arc.weight
            inst.bias[arc.dst] += arc.weight
    if sum(inst.bias) != 0:
        raise SolverError("biases do not sum to zero")
    if any(c < 0 for c in inst.acost):
        raise SolverError("negative arc cost after uncapacitating")
    inst._build_adjacency()
    return inst


@dataclass
class SolveStats:
    outer_phases: int = 0
    augmentations: int = 0
    contractions: int = 0
    repairs: int = 0
    wall_ms: float = 0.0


@dataclass
class SolverState:
    """Optimal flow and integer duals, with contractions fully unrolled."""

    inst: CirculationInstance
    flow: list[int]
    potentials: list[int]
    stats: SolveStats = field(default_factory=SolveStats)

    def reduced_cost(self, a: int) -> int:
        inst = self.inst
        return inst.acost[a] + self.potentials[inst.adst[a]] - self.potentials[inst.asrc[a]]

    def objective(self) -> int:
        acost = self.inst.acost
        return sum(acost[a] * f for a, f in enumerate(self.flow) if f)

    def excess_vector(self) -> list[int]:
        inst = self.inst
        e = list(inst.bias)
        for a, f in enumerate(self.flow):
            if f:
                e[inst.adst[a]] += f
                e[inst.asrc[a]] -= f
        return e

    def check_optimality(self) -> bool:
        """Dual feasibility, complementary slackness and flow conservation."""
        for a in range(self.inst.m):
            rc = self.reduced_cost(a)
            if rc < 0:
                return False
            if self.flow[a] and rc != 0:
                return False
        if self.flow and min(self.flow) < 0:
            return False
        return all(x == 0 for x in self.excess_vector())


def circulation_value(state: SolverState, sg: ShiftedGraph) -> int:
    """Value of the optimal capacitated circulation (max sum s(e) f(e))."""
    return sg.score_offset - state.objective()


def shifted_score(sg: ShiftedGraph, full_ranks: list[int]):
    """Shifted-penalty score of a ranking over all sg vertices.

    ``full_ranks`` must cover the sentinels too.  Infinite-capacity arcs
    must be satisfied exactly; a violation returns None.
    """
    total = 0
    for arc in sg.arcs:
        viol = full_ranks[arc.src] - full_ranks[arc.dst] + arc.shift
        if arc.weight is None:
            if viol > 0:
                return None
        elif viol > 0:
            total += arc.weight * viol
    return total


def extract_ranking(state: SolverState, sg: ShiftedGraph) -> list[int]:
    """Ranks r(v) = pi(v) - pi(alpha), guaranteed inside [0, k-1]."""
    base = state.potentials[sg.alpha]
    ranks = [state.potentials[v] - base for v in range(sg.n_original)]
    for v, r in enumerate(ranks):
        if not (0 <= r <= sg.k - 1):
            raise SolverError(f"rank {r} of vertex {v} outside [0, {sg.k - 1}]")
    return ranks


def dump_state(state: SolverState, fh: TextIO):
    """Debug dump: one "arc src dst flow" line per arc, then duals."""
    inst = state.inst
    for a in range(inst.m):
        fh.write(f"arc {inst.asrc[a]} {inst.adst[a]} {state.flow[a]}\n")
    for v in range(inst.n):
        fh.write(f"dual {v} {state.potentials[v]}\n")


# ---------------------------------------------------------------------------
# solver core
# ---------------------------------------------------------------------------

_UNSET = -2
_ROOT = -1


class _Core:
    """Shared state of both solvers: flow, duals, contraction bookkeeping.

    Contractions are a union-find whose offsets freeze the dual difference
    between merged clusters; reduced costs are always computed from the
    original arc costs plus unrolled potentials, so no arc rewriting is
    needed and the final duals of absorbed vertices come out for free.
    """

    def __init__(self, inst: CirculationInstance, contract_factor: int, check: bool):
        n = inst.n
        self.inst = inst
        self.contract_factor = contract_factor
        self.check = check
        self.flow = [0] * inst.m
        self.pot = [0] * n
        self.parent = list(range(n))
        self.off = [0] * n
        self.has_contractions = False
        self.roots: set[int] = set(range(n))
        self.excess = list(inst.bias)
        self.out_arcs = [list(x) for x in inst.out_arcs]
        self.in_arcs = [list(x) for x in inst.in_arcs]
        self.members: dict[int, list[int]] = {v: [v] for v in range(n)}
        # (arc, members of absorbed cluster, True if arc dst was absorbed)
        self.clog: list[tuple[int, tuple[int, ...], bool]] = []
        self.stats = SolveStats()

    # -- union-find with potential offsets --------------------------------

    def find(self, x: int) -> int:
        p = self.parent
        if p[x] == x:
            return x
        path = []
        v = x
        while p[v] != v:
            path.append(v)
            v = p[v]
        root = v
        off = self.off
        acc = 0
        for v in reversed(path):
            acc += off[v]
            p[v] = root
            off[v] = acc
        return root

    def potential(self, x: int) -> int:
        r = self.find(x)
        return self.pot[r] if x == r else self.pot[r] + self.off[x]

    def _pot_reader(self):
        """Fast potential accessor; plain list lookup until contractions."""
        if self.has_contractions:
            return self.potential
        return self.pot.__getitem__

    # -- contraction -------------------------------------------------------

    def contract_pass(self, delta: int):
        thr = self.contract_factor * self.inst.n * delta
        if thr < 1:
            thr = 1
        flow = self.flow
        for a, f in enumerate(flow):
            if f >= thr:
                self._contract_arc(a)

    def _contract_arc(self, a: int):
        inst = self.inst
        rs = self.find(inst.asrc[a])
        rd = self.find(inst.adst[a])
        if rs == rd:
            return
        # keep the root with the bigger adjacency to bound merge work
        size_s = len(self.out_arcs[rs]) + len(self.in_arcs[rs])
        size_d = len(self.out_arcs[rd]) + len(self.in_arcs[rd])
        if size_s >= size_d:
            keep, absorbed, dst_in_absorbed = rs, rd, True
        else:
            keep, absorbed, dst_in_absorbed = rd, rs, False
        self.clog.append((a, tuple(self.members[absorbed]), dst_in_absorbed))
        # freeze the current dual relation between the two clusters
        self.parent[absorbed] = keep
        self.off[absorbed] = self.pot[absorbed] - self.pot[keep]
        self.excess[keep] += self.excess[absorbed]
        self.out_arcs[keep].extend(self.out_arcs[absorbed])
        self.in_arcs[keep].extend(self.in_arcs[absorbed])
        self.out_arcs[absorbed] = []
        self.in_arcs[absorbed] = []
        self.members[keep].extend(self.members[absorbed])
        del self.members[absorbed]
        self.roots.discard(absorbed)
        self.has_contractions = True
        self.stats.contractions += 1

    # -- invariants ---------------------------------------------------------

    def check_state(self):
        P = self.potential
        inst = self.inst
        for a in range(inst.m):
            rc = inst.acost[a] + P(inst.adst[a]) - P(inst.asrc[a])
            if rc < 0:
                raise SolverError(f"negative reduced cost {rc} on arc {a}")
            if self.flow[a] and rc != 0:
                raise SolverError(f"slackness violated on arc {a}")
        if inst.k is not None and self.roots:
            pots = [self.pot[r] for r in self.roots]
            if max(pots) - min(pots) > inst.k:
                raise SolverError("dual spread exceeds k")

    # -- finish --------------------------------------------------------------

    def finalize(self) -> SolverState:
        inst = self.inst
        flow = self.flow
        e = list(inst.bias)
        for a, f in enumerate(flow):
            if f:
                e[inst.adst[a]] += f
                e[inst.asrc[a]] -= f
        # re-balance contracted arcs, newest contraction first
        for a, members, dst_in_absorbed in reversed(self.clog):
            s_b = sum(e[v] for v in members)
            if s_b:
                df = -s_b if dst_in_absorbed else s_b
                flow[a] += df
                e[inst.adst[a]] += df
                e[inst.asrc[a]] -= df
                if flow[a] < 0:
                    raise SolverError("contracted arc flow went negative while unrolling")
        if any(e):
            raise SolverError("flow conservation violated after unrolling")
        potentials = [self.potential(v) for v in range(inst.n)]
        return SolverState(inst, flow, potentials, self.stats)


def _initial_delta(core: _Core) -> int:
    """Largest power of two not above min(max excess, max deficit).

    Power-of-two granularities make every halving exact, so all flows stay
    multiples of the current delta and reverse residual arcs always carry
    at least delta.
    """
    hi = max((core.excess[r] for r in core.roots), default=0)
    lo = max((-core.excess[r] for r in core.roots), default=0)
    bound = min(hi, lo)
    if bound <= 1:
        return max(bound, 1)
    return 1 << (bound.bit_length() - 1)


def _has_excess(core: _Core) -> bool:
    return any(core.excess[r] for r in core.roots)


# ---------------------------------------------------------------------------
# baseline: one source per shortest-path tree, tree rebuilt every augmentation
# ---------------------------------------------------------------------------

def solve_baseline(
    inst: CirculationInstance, *, contract_factor: int = 3, check_invariants: bool = False
) -> SolverState:
    """Delta-scaling successive shortest path solver (the reference)."""
    t0 = time.perf_counter()
    core = _Core(inst, contract_factor, check_invariants)
    delta = _initial_delta(core)
    guard = 0
    while _has_excess(core):
        core.stats.outer_phases += 1
        core.contract_pass(delta)
        while True:
            # highest excess first, ties broken by lowest vertex index
            s = r = None
            es = er = 0
            for v in core.roots:
                ev = core.excess[v]
                if ev > es or (ev == es > 0 and v < s):
                    es, s = ev, v
                elif ev < er or (ev == er < 0 and v < r):
                    er, r = ev, v
            if s is None or r is None:
                break
            if not (_ALPHA_DEN * es >= _ALPHA_NUM * delta and -_ALPHA_DEN * er >= _ALPHA_NUM * delta):
                break
            _augment_single(core, s, r, delta)
            core.stats.augmentations += 1
        if check_invariants:
            core.check_state()
        if not _has_excess(core):
            break
        if delta == 1:
            guard += 1
            if guard > 1:
                raise SolverError("no progress at unit granularity")
        delta = max(1, delta // 2)
    core.stats.wall_ms = (time.perf_counter() - t0) * 1e3
    return core.finalize()


def _augment_single(core: _Core, s: int, r: int, delta: int):
    """Dijkstra from s, dual update pi -= d, push delta along the r path."""
    inst = core.inst
    P = core._pot_reader()
    find = core.find
    flow = core.flow
    asrc, adst, acost = inst.asrc, inst.adst, inst.acost
    n = inst.n
    dist = [None] * n
    par_arc = [_UNSET] * n
    par_dir = [0] * n
    par_vert = [_ROOT] * n
    heap = [(0, s)]
    dist[s] = 0
    settled = bytearray(n)
    order: list[int] = []
    while heap:
        d, v = heappop(heap)
        if settled[v]:
            continue
        settled[v] = 1
        order.append(v)
        for a in core.out_arcs[v]:
            w = find(adst[a]) if core.has_contractions else adst[a]
            if w == v or settled[w]:
                continue
            rc = acost[a] + P(adst[a]) - P(asrc[a])
            if rc < 0:
                raise SolverError(f"negative reduced cost {rc} on arc {a}")
            nd = d + rc
            if dist[w] is None or nd < dist[w]:
                dist[w] = nd
                par_arc[w] = a
                par_dir[w] = 1
                par_vert[w] = v
                heappush(heap, (nd, w))
        for a in core.in_arcs[v]:
            if not flow[a]:
                continue
            w = find(asrc[a]) if core.has_contractions else asrc[a]
            if w == v or settled[w]:
                continue
            rc = P(asrc[a]) - P(adst[a]) - acost[a]
            if rc < 0:
                raise SolverError(f"negative residual cost {rc} on reverse of arc {a}")
            nd = d + rc
            if dist[w] is None or nd < dist[w]:
                dist[w] = nd
                par_arc[w] = a
                par_dir[w] = -1
                par_vert[w] = v
                heappush(heap, (nd, w))
    if len(order) != len(core.roots):
        raise SolverError("residual graph is not connected from the source")
    pot = core.pot
    for v in order:
        pot[v] -= dist[v]
    # walk the tree path from r back to s and push delta along it
    v = r
    while v != s:
        a = par_arc[v]
        if a == _UNSET:
            raise SolverError("sink unreachable from source")
        if par_dir[v] == 1:
            flow[a] += delta
        else:
            flow[a] -= delta
            if flow[a] < 0:
                raise SolverError("negative flow after augmentation")
        v = par_vert[v]
    core.excess[s] -= delta
    core.excess[r] += delta


# ---------------------------------------------------------------------------
# fast solver: multi-source tree, repaired dynamically after augmentations
# ---------------------------------------------------------------------------

class _Tree:
    """Shortest-path forest over cluster roots, lexicographic (cost, hops)."""

    __slots__ = ("par_arc", "par_dir", "par_vert", "hops", "children")

    def __init__(self, n: int):
        self.par_arc = [_UNSET] * n
        self.par_dir = [0] * n
        self.par_vert = [_UNSET] * n
        self.hops = [0] * n
        self.children: list[set] = [set() for _ in range(n)]


def solve_fast(
    inst: CirculationInstance, *, contract_factor: int = 3, check_invariants: bool = False
) -> SolverState:
    """Multi-source variant: one tree per phase, repaired after each push.

    Sources are all vertices with excess >= 3/4 delta; after every
    augmentation the affected subtrees (children of deleted residual arcs
    and of exhausted sources) are re-rooted by a bounded Dijkstra seeded
    from the unaffected frontier.
    """
    t0 = time.perf_counter()
    core = _Core(inst, contract_factor, check_invariants)
    delta = _initial_delta(core)
    guard = 0
    while _has_excess(core):
        core.stats.outer_phases += 1
        core.contract_pass(delta)
        lim = _ALPHA_NUM * delta
        sources = {v for v in core.roots if _ALPHA_DEN * core.excess[v] >= lim}
        sinks = [v for v in core.roots if -_ALPHA_DEN * core.excess[v] >= lim]
        if sources and sinks:
            tree = _build_tree(core, sources)
            sink_heap = [(core.excess[v], v) for v in sinks]
            heapify(sink_heap)
            sink_set = set(sinks)
            while sources and sink_set and sink_heap:
                ev, r = heappop(sink_heap)
                if r not in sink_set or core.excess[r] != ev:
                    continue
                seeds = _augment_tree(core, tree, r, delta)
                core.stats.augmentations += 1
                sroot = seeds.pop()  # last entry is the drained root
                if _ALPHA_DEN * core.excess[sroot] < lim:
                    sources.discard(sroot)
                    seeds.append(sroot)
                if -_ALPHA_DEN * core.excess[r] < lim:
                    sink_set.discard(r)
                else:
                    heappush(sink_heap, (core.excess[r], r))
                if not sources:
                    break
                if seeds:
                    _repair_tree(core, tree, seeds)
                    core.stats.repairs += 1
        if check_invariants:
            core.check_state()
        if not _has_excess(core):
            break
        if delta == 1:
            guard += 1
            if guard > 1:
                raise SolverError("no progress at unit granularity")
        delta = max(1, delta // 2)
    core.stats.wall_ms = (time.perf_counter() - t0) * 1e3
    return core.finalize()


def _residual_out(core: _Core, v: int):
    """Yield (rc, w, arc, dir) for every residual arc leaving cluster v."""
    inst = core.inst
    P = core._pot_reader()
    find = core.find
    flow = core.flow
    asrc, adst, acost = inst.asrc, inst.adst, inst.acost
    contracted = core.has_contractions
    for a in core.out_arcs[v]:
        w = find(adst[a]) if contracted else adst[a]
        if w == v:
            continue
        rc = acost[a] + P(adst[a]) - P(asrc[a])
        if rc < 0:
            raise SolverError(f"negative reduced cost {rc} on arc {a}")
        yield rc, w, a, 1
    for a in core.in_arcs[v]:
        if not flow[a]:
            continue
        w = find(asrc[a]) if contracted else asrc[a]
        if w == v:
            continue
        rc = P(asrc[a]) - P(adst[a]) - acost[a]
        if rc < 0:
            raise SolverError(f"negative residual cost {rc} on reverse of arc {a}")
        yield rc, w, a, -1


def _build_tree(core: _Core, sources: set) -> _Tree:
    """Lexicographic multi-source Dijkstra; subtracts distances from duals."""
    n = core.inst.n
    tree = _Tree(n)
    heap = [(0, 0, s, _ROOT, 0, _ROOT) for s in sorted(sources)]
    heapify(heap)
    settled = bytearray(n)
    order: list[tuple[int, int]] = []
    while heap:
        d, h, v, a, adir, pv = heappop(heap)
        if settled[v]:
            continue
        settled[v] = 1
        order.append((v, d))
        tree.par_arc[v] = a
        tree.par_dir[v] = adir
        tree.par_vert[v] = pv
        tree.hops[v] = h
        if pv != _ROOT:
            tree.children[pv].add(v)
        for rc, w, arc, wdir in _residual_out(core, v):
            if not settled[w]:
                heappush(heap, (d + rc, h + 1, w, arc, wdir, v))
    if len(order) != len(core.roots):
        raise SolverError("residual graph is not connected from the sources")
    pot = core.pot
    for v, d in order:
        if d:
            pot[v] -= d
    return tree


def _augment_tree(core: _Core, tree: _Tree, r: int, delta: int) -> list[int]:
    """Push delta from r's tree root down to r.

    Returns the repair seeds (children whose parent arc got deleted), with
    the drained root appended last so the caller can pop it off.
    """
    flow = core.flow
    seeds: list[int] = []
    v = r
    while True:
        a = tree.par_arc[v]
        if a == _ROOT:
            break
        if a == _UNSET:
            raise SolverError("sink is not attached to the shortest path tree")
        if tree.par_dir[v] == 1:
            flow[a] += delta
        else:
            f = flow[a] - delta
            if f < 0:
                raise SolverError("negative flow after augmentation")
            flow[a] = f
            if f == 0:
                seeds.append(v)  # the residual arc feeding v vanished
        v = tree.par_vert[v]
    core.excess[v] -= delta
    core.excess[r] += delta
    seeds.append(v)
    return seeds


def _repair_tree(core: _Core, tree: _Tree, seeds: list[int]):
    """Re-root the subtrees below the seeds from the unaffected frontier.

    Inserted residual arcs never need repair (they run child to parent and
    are tight); only deletions and source removals invalidate distances,
    and those can only grow, so the affected region is re-relaxed by a
    Dijkstra seeded with every residual arc entering it from outside.
    """
    affected: set[int] = set()
    stack = list(seeds)
    while stack:
        x = stack.pop()
        if x in affected:
            continue
        affected.add(x)
        stack.extend(tree.children[x])
    for s in seeds:
        p = tree.par_vert[s]
        if p not in (_ROOT, _UNSET) and p not in affected:
            tree.children[p].discard(s)

    inst = core.inst
    P = core._pot_reader()
    find = core.find
    flow = core.flow
    asrc, adst, acost = inst.asrc, inst.adst, inst.acost
    contracted = core.has_contractions
    heap = []
    for x in affected:
        for a in core.in_arcs[x]:
            u = find(asrc[a]) if contracted else asrc[a]
            if u == x or u in affected:
                continue
            rc = acost[a] + P(adst[a]) - P(asrc[a])
            if rc < 0:
                raise SolverError(f"negative reduced cost {rc} on arc {a}")
            heappush(heap, (rc, tree.hops[u] + 1, x, a, 1, u))
        for a in core.out_arcs[x]:
            if not flow[a]:
                continue
            u = find(adst[a]) if contracted else adst[a]
            if u == x or u in affected:
                continue
            rc = P(asrc[a]) - P(adst[a]) - acost[a]
            if rc < 0:
                raise SolverError(f"negative residual cost {rc} on reverse of arc {a}")
            heappush(heap, (rc, tree.hops[u] + 1, x, a, -1, u))

    settled: dict[int, int] = {}
    while heap:
        d, h, x, a, adir, pv = heappop(heap)
        if x in settled:
            continue
        settled[x] = d
        tree.par_arc[x] = a
        tree.par_dir[x] = adir
        tree.par_vert[x] = pv
        tree.hops[x] = h
        tree.children[x] = set()
        for rc, w, arc, wdir in _residual_out(core, x):
            if w in affected and w not in settled:
                heappush(heap, (d + rc, h + 1, w, arc, wdir, x))
    if len(settled) != len(affected):
        raise SolverError("affected region disconnected during tree repair")
    pot = core.pot
    for x, d in settled.items():
        if d:
            pot[x] -= d
    for x in affected:
        tree.children[tree.par_vert[x]].add(x)
