"""Divide-and-conquer split tree for fast agony heuristics.

One leaf holds the whole vertex set; any leaf whose best bipartition has
negative gain is split, left half below right half, until no split pays
off.  All counters are maintained incrementally under edge deletion so the
whole build costs O(m log n): every split enumerates only the side with
fewer adjacent edges, and zero-degree vertices ride along in starred sets
whose contributions are tracked as O(1) aggregates.

Leaves in left-to-right order induce the ranking; a dynamic program prunes
the tree to at most k leaves when a tier budget is given.
"""
from __future__ import annotations

from typing import Callable, Optional

from .graph import WeightedDigraph


class TreeNode:
    """Node of the split tree.

    Leaves carry their vertex list; internal nodes carry the split gain,
    which is always negative.  ``leaf`` points at the working leaf state
    while a build is in progress and is dropped when the tree freezes.
    """

    __slots__ = ("left", "right", "gain", "vertices", "leaf")

    def __init__(self):
        self.left: Optional[TreeNode] = None
        self.right: Optional[TreeNode] = None
        self.gain: int = 0
        self.vertices: Optional[list[int]] = None
        self.leaf = None

    @property
    def is_leaf(self) -> bool:
        return self.left is None


class SplitTree:
    """Result of a build: ordered binary tree plus the score identity."""

    def __init__(self, root: Optional[TreeNode], n: int, total_weight: int):
        self.root = root
        self.n = n
        self.total_weight = total_weight

    def leaves(self) -> list[TreeNode]:
        if self.root is None:
            return []
        out, stack = [], [self.root]
        while stack:
            node = stack.pop()
            if node.is_leaf:
                out.append(node)
            else:
                stack.append(node.right)
                stack.append(node.left)
        return out

    def internal_nodes(self) -> list[TreeNode]:
        if self.root is None:
            return []
        out, stack = [], [self.root]
        while stack:
            node = stack.pop()
            if not node.is_leaf:
                out.append(node)
                stack.append(node.right)
                stack.append(node.left)
        return out

    def score(self) -> int:
        """Total edge weight plus the sum of (negative) split gains."""
        return self.total_weight + sum(node.gain for node in self.internal_nodes())

    def ranking(self) -> list[int]:
        ranks = [0] * self.n
        for i, leaf in enumerate(self.leaves()):
            for v in leaf.vertices:
                ranks[v] = i
        return ranks


class LeafState:
    """Mutable per-leaf working state during a build.

    N/P hold live (positive intra-leaf degree) vertices by the sign of
    diff(y) = flux(y) + inback(y) - outback(y); the starred sets hold the
    zero-degree ones, with their inback/outback sums kept as aggregates so
    a split never has to enumerate them.
    """

    __slots__ = (
        "N", "P", "Ns", "Ps", "back", "in_total", "out_total",
        "sin_ns", "sout_ns", "sin_ps", "sout_ps", "node",
    )

    def __init__(self):
        self.N: dict[int, None] = {}
        self.P: dict[int, None] = {}
        self.Ns: dict[int, None] = {}
        self.Ps: dict[int, None] = {}
        self.back = 0
        self.in_total = 0
        self.out_total = 0
        self.sin_ns = 0
        self.sout_ns = 0
        self.sin_ps = 0
        self.sout_ps = 0
        self.node: Optional[TreeNode] = None

    def members(self) -> list[int]:
        out = list(self.N)
        out += list(self.P)
        out += list(self.Ns)
        out += list(self.Ps)
        return out


class SplitTreeBuilder:
    """Incremental split-tree construction over a normalized graph."""

    def __init__(self, g: WeightedDigraph):
        if not g.is_normalized():
            raise ValueError("graph must be normalized first (see agony.graph.normalize)")
        self.g = g
        n = g.n
        self.flux = [0] * n
        self.inb = [0] * n
        self.outb = [0] * n
        self.deg = [0] * n
        self.out_e: list[dict[int, int]] = [dict() for _ in range(n)]
        self.in_e: list[dict[int, int]] = [dict() for _ in range(n)]
        for u, v, w in g.edges:
            self.out_e[u][v] = w
            self.in_e[v][u] = w
            self.flux[u] -= w
            self.flux[v] += w
            self.deg[u] += 1
            self.deg[v] += 1

        root = LeafState()
        for v in range(n):
            if self.deg[v] > 0:
                (root.N if self.flux[v] < 0 else root.P)[v] = None
            else:
                root.Ps[v] = None  # diff = 0 counts as P-side
        node = TreeNode()
        root.node = node
        node.leaf = root
        self.root_node = node
        self.root_leaf = root

    # -- split decision ----------------------------------------------------

    def left_smaller(self, leaf: LeafState) -> bool:
        """True iff N's adjacent edge count is <= P's, in O(min) time.

        Interleaved accumulation: cross edges count once on each side and
        intra-side edges twice, so comparing degree sums is exact.
        """
        deg = self.deg
        it1 = iter(leaf.N)
        it2 = iter(leaf.P)
        y1 = next(it1, -1)
        y2 = next(it2, -1)
        c1 = c2 = 0
        while True:
            if y1 < 0 and c1 <= c2:
                return True
            if y2 < 0 and c1 >= c2:
                return False
            if c1 <= c2:
                c1 += deg[y1]
                y1 = next(it1, -1)
            else:
                c2 += deg[y2]
                y2 = next(it2, -1)

    def split_gain(self, leaf: LeafState) -> tuple[int, bool]:
        """Score change of the best split, computed from the cheaper side."""
        flux, inb, outb = self.flux, self.inb, self.outb
        left_driven = self.left_smaller(leaf)
        if left_driven:
            s = sum(flux[y] + inb[y] - outb[y] for y in leaf.N)
            gain = leaf.back + leaf.out_total + (leaf.sin_ns - leaf.sout_ns) + s
        else:
            s = sum(flux[y] + inb[y] - outb[y] for y in leaf.P)
            gain = leaf.back + leaf.in_total - (leaf.sin_ps - leaf.sout_ps) - s
        return gain, left_driven

    # -- split execution -----------------------------------------------------

    def split_leaf(self, leaf: LeafState, left_driven: bool) -> tuple[LeafState, LeafState]:
        """Split a leaf into (N u N*, P u P*), enumerating only one side.

        Deletes the cross edges between the halves, updates the per-vertex
        counters, recomputes the leaf totals from the driving side's
        snapshots, and re-files every vertex that lost an edge.
        """
        flux, inb, outb, deg = self.flux, self.inb, self.outb, self.deg
        out_e, in_e = self.out_e, self.in_e
        drive = leaf.N if left_driven else leaf.P
        other = leaf.P if left_driven else leaf.N

        s_in = sum(inb[x] for x in drive)
        s_out = sum(outb[x] for x in drive)
        snap_back, snap_in, snap_out = leaf.back, leaf.in_total, leaf.out_total

        cross_rl = 0
        touched: dict[int, None] = {}
        for x in drive:
            dels = [z for z in out_e[x] if z in other]
            for z in dels:
                w = out_e[x].pop(z)
                del in_e[z][x]
                deg[x] -= 1
                deg[z] -= 1
                flux[x] += w
                flux[z] -= w
                if not left_driven:  # x in P, z in N: a new right-to-left edge
                    outb[x] += w
                    inb[z] += w
                    cross_rl += w
                touched[x] = None
                touched[z] = None
            dels = [z for z in in_e[x] if z in other]
            for z in dels:
                w = in_e[x].pop(z)
                del out_e[z][x]
                deg[x] -= 1
                deg[z] -= 1
                flux[x] -= w
                flux[z] += w
                if left_driven:  # z in P, x in N: a new right-to-left edge
                    outb[z] += w
                    inb[x] += w
                    cross_rl += w
                touched[x] = None
                touched[z] = None

        left = LeafState()
        right = LeafState()
        left.N, left.Ns = leaf.N, leaf.Ns
        right.P, right.Ps = leaf.P, leaf.Ps
        left.sin_ns, left.sout_ns = leaf.sin_ns, leaf.sout_ns
        right.sin_ps, right.sout_ps = leaf.sin_ps, leaf.sout_ps
        if left_driven:
            left.back = snap_back + snap_out - s_out - leaf.sout_ns
            right.back = snap_back + s_in + leaf.sin_ns
            left.in_total = s_in + leaf.sin_ns + cross_rl
            left.out_total = s_out + leaf.sout_ns
            right.in_total = snap_in - s_in - leaf.sin_ns
            right.out_total = snap_out - s_out - leaf.sout_ns + cross_rl
        else:
            left.back = snap_back + s_out + leaf.sout_ps
            right.back = snap_back + snap_in - s_in - leaf.sin_ps
            left.in_total = snap_in - s_in - leaf.sin_ps + cross_rl
            left.out_total = snap_out - s_out - leaf.sout_ps
            right.in_total = s_in + leaf.sin_ps
            right.out_total = s_out + leaf.sout_ps + cross_rl

        for y in touched:
            if y in left.N:
                del left.N[y]
                target = left
            else:
                del right.P[y]
                target = right
            d = flux[y] + inb[y] - outb[y]
            if deg[y] == 0:
                if d < 0:
                    target.Ns[y] = None
                    target.sin_ns += inb[y]
                    target.sout_ns += outb[y]
                else:
                    target.Ps[y] = None
                    target.sin_ps += inb[y]
                    target.sout_ps += outb[y]
            elif d < 0:
                target.N[y] = None
            else:
                target.P[y] = None
        # a one-sided split has gain back + in_total >= 0 and is never taken
        if not (left.N or left.Ns or left.P or left.Ps) or not (
            right.N or right.Ns or right.P or right.Ps
        ):
            raise AssertionError("profitable split produced an empty half")
        return left, right

    # -- driving loop ----------------------------------------------------------

    def run(self, after_split: Optional[Callable[["SplitTreeBuilder"], None]] = None) -> SplitTree:
        stack = [self.root_leaf]
        while stack:
            leaf = stack.pop()
            gain, left_driven = self.split_gain(leaf)
            if gain >= 0:
                continue
            left, right = self.split_leaf(leaf, left_driven)
            node = leaf.node
            node.gain = gain
            node.left = TreeNode()
            node.right = TreeNode()
            node.leaf = None
            left.node = node.left
            right.node = node.right
            node.left.leaf = left
            node.right.leaf = right
            if after_split is not None:
                after_split(self)
            stack.append(right)
            stack.append(left)
        return self._freeze()

    def current_leaves(self) -> list[LeafState]:
        """Live leaves in left-to-right order (for mid-build auditing)."""
        out, stack = [], [self.root_node]
        while stack:
            node = stack.pop()
            if node.is_leaf:
                out.append(node.leaf)
            else:
                stack.append(node.right)
                stack.append(node.left)
        return out

    def _freeze(self) -> SplitTree:
        stack = [self.root_node]
        while stack:
            node = stack.pop()
            if node.is_leaf:
                node.vertices = sorted(node.leaf.members())
                node.leaf = None
            else:
                stack.append(node.right)
                stack.append(node.left)
        return SplitTree(self.root_node, self.g.n, self.g.total_weight)


def build_split_tree(
    g: WeightedDigraph,
    after_split: Optional[Callable[[SplitTreeBuilder], None]] = None,
) -> SplitTree:
    """Build the full split tree of a normalized graph."""
    return SplitTreeBuilder(g).run(after_split)


# ---------------------------------------------------------------------------
# pruning to a tier budget
# ---------------------------------------------------------------------------

class PruneDP:
    """Budgeted pruning of a split tree by dynamic programming.

    opt(node; h) is the best achievable gain sum in the subtree using at
    most h tiers: 0 for leaves or h = 1, otherwise the node's gain plus the
    best budget split between the children.  Ties prefer the smallest
    left-child budget.
    """

    def __init__(self, tree: SplitTree, kmax: int):
        if kmax < 1:
            raise ValueError(f"tier budget must be >= 1, got {kmax}")
        self.tree = tree
        self.kmax = kmax
        self._nleaves: dict[int, int] = {}
        self._opt: dict[int, list] = {}
        self._choice: dict[int, list] = {}
        if tree.root is not None:
            self._compute()

    def _postorder(self) -> list[TreeNode]:
        out, stack = [], [self.tree.root]
        while stack:
            node = stack.pop()
            out.append(node)
            if not node.is_leaf:
                stack.append(node.left)
                stack.append(node.right)
        out.reverse()
        return out

    def _compute(self):
        kmax = self.kmax
        nl, opt, choice = self._nleaves, self._opt, self._choice
        for node in self._postorder():
            key = id(node)
            if node.is_leaf:
                nl[key] = 1
                opt[key] = [0, 0]
                choice[key] = [None, None]
                continue
            lk, rk = id(node.left), id(node.right)
            leaves = nl[lk] + nl[rk]
            nl[key] = leaves
            cap = min(kmax, leaves)
            cap_l = min(kmax, nl[lk])
            cap_r = min(kmax, nl[rk])
            arr = [None] * (cap + 1)
            ch = [None] * (cap + 1)
            arr[1] = 0
            lopt, ropt = opt[lk], opt[rk]
            for h in range(2, cap + 1):
                best = None
                best_l = None
                lo = max(1, h - cap_r)
                hi = min(cap_l, h - 1)
                for l in range(lo, hi + 1):
                    val = lopt[l] + ropt[h - l]
                    if best is None or val < best:
                        best, best_l = val, l
                arr[h] = node.gain + best
                ch[h] = best_l
            opt[key] = arr
            choice[key] = ch

    def leaves_under(self, node: TreeNode) -> int:
        return self._nleaves[id(node)]

    def value(self, h: int) -> int:
        """Best gain sum for the whole tree with at most h tiers."""
        if self.tree.root is None:
            return 0
        arr = self._opt[id(self.tree.root)]
        return arr[min(h, len(arr) - 1)]

    def groups(self, h: int) -> list[list[int]]:
        """Vertex groups of the optimal pruning, left to right."""
        if self.tree.root is None:
            return []
        out: list[list[int]] = []
        stack = [(self.tree.root, h)]
        while stack:
            node, budget = stack.pop()
            budget = min(budget, self._nleaves[id(node)], self.kmax)
            if node.is_leaf or budget <= 1:
                out.append(_vertices_under(node))
                continue
            l = self._choice[id(node)][budget]
            # right pushed first so the left group comes out first
            stack.append((node.right, budget - l))
            stack.append((node.left, l))
        return out


def _vertices_under(node: TreeNode) -> list[int]:
    out: list[int] = []
    stack = [node]
    while stack:
        cur = stack.pop()
        if cur.is_leaf:
            out.extend(cur.vertices)
        else:
            stack.append(cur.right)
            stack.append(cur.left)
    return out


def prune_tree(tree: SplitTree, k: int) -> list[int]:
    """Ranking with at most k tiers minimizing total weight plus gains."""
    if k < 1:
        raise ValueError(f"tier budget must be >= 1, got {k}")
    ranks = [0] * tree.n
    for i, group in enumerate(PruneDP(tree, k).groups(k)):
        for v in group:
            ranks[v] = i
    return ranks
