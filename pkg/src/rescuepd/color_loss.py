"""Color-coding solver parameterized by the acceptable diversity loss.

Saving everything except a sacrifice set loses exactly the weight of the
edges whose every descendant taxon is sacrificed.  Sacrifices are encoded as
anchored tuples (taxon, ancestor anchor, sibling edge): the path from anchor
to taxon accounts for the dead edges, and the sibling edge certifies that
something above the anchor stays alive.  Edges carry a key color plus
weight-1 extra colors from a palette of twice the loss budget; a
color-respectful anchored set has pairwise color-disjoint paths, distinct
sibling key colors, and an extinction-ordered insertion sequence whose
sibling key never collides with path colors seen so far.  Under such a
coloring, counted colors equal lost weight, so a dynamic program over
(path-color set, sibling-color set, deadline class) that maximizes the
rescue length of the sacrificed prefix decides the colored instance
exactly; deficits (needed minus available hours per deadline prefix) give
the thresholds a sacrifice must reach.

Randomized trials draw the coloring from a seeded hash; a fixed witness
uses at most 2 * loss color slots, so a trial succeeds with probability at
least e^(-2*loss) and ceil(e^(2*loss) * ln(1/delta)) trials bound the
false-no rate by delta.  Yes answers are re-verified before return.

The dynamic program requires a binary tree (which makes the sibling edge of
an anchor unique); the predicates work on any tree since tuples carry their
sibling edge explicitly.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .color_target import INF, _trial_rng, trial_count
from .errors import LossTooLarge, NonBinaryTree, RescuePDError
from .feasibility import build_collaborative_schedule, collaborative_feasible
from .model import (DerivedIndex, Instance, PhyloTree, build_derived_index,
                    canon, classify_trivial, pd_of_subset)
from .outcome import SolveOutcome

MINF = -INF
LOSS_LIMIT = 14  # 2 * loss color bits


@dataclass(frozen=True)
class LossColoring:
    """Key color per edge, extra colors per path-eligible edge.

    ``eligible`` holds the edges sacrifice paths may use: weight within the
    loss budget and a well-formed color set (exactly weight distinct colors,
    key color included).  Heavier edges still carry a key color so they can
    serve as sibling edges.
    """

    n_colors: int
    key_color: dict        # edge -> color in [1, n_colors]
    extra_colors: dict     # eligible edge -> bitmask of the weight-1 extras
    eligible: frozenset

    def key_bit(self, e: str) -> int:
        return 1 << (self.key_color[e] - 1)

    def color_mask(self, e: str) -> int:
        return self.key_bit(e) | self.extra_colors.get(e, 0)

    def path_mask(self, edges) -> int:
        m = 0
        for e in edges:
            m |= self.color_mask(e)
        return m

    def path_has_unique_colors(self, edges) -> bool:
        total, union = 0, 0
        for e in set(edges):
            m = self.color_mask(e)
            total += m.bit_count()
            union |= m
        return total == union.bit_count()


def make_loss_coloring(tree: PhyloTree, loss: int, key_color: dict,
                       extra_colors: dict) -> LossColoring:
    """Assemble a coloring, demoting ill-formed small edges.

    An edge of weight w within the loss budget is path-eligible only if its
    extras are exactly w-1 colors distinct from the key color; random draws
    that collide are demoted (treated like heavy edges), which preserves the
    exact color-to-weight accounting on every eligible edge.
    """
    eligible = set()
    extras = {}
    for e in tree.edge_order:
        w = tree.weight[e]
        if w > loss or e not in extra_colors:
            continue
        mask = extra_colors[e]
        if mask.bit_count() == w - 1 and not mask & (1 << (key_color[e] - 1)):
            eligible.add(e)
            extras[e] = mask
    return LossColoring(2 * loss, dict(key_color), extras, frozenset(eligible))


def anchored_tuples(tree: PhyloTree):
    """All structurally valid (taxon, anchor, sibling edge) tuples.

    Returns (x, v, e, path) with path the edges from x up to (excluding) v,
    each edge named by its child vertex.
    """
    out = []
    for x in tree.taxa:
        path = [x]
        below = x
        v = tree.parent[x]
        while True:
            for e in tree.children[v]:
                if e != below:
                    out.append((x, v, e, tuple(path)))
            if v == tree.root:
                break
            path.append(v)
            below = v
            v = tree.parent[v]
    return out


def path_between(tree: PhyloTree, v: str, x: str) -> tuple[str, ...]:
    """Edges from strict ancestor v down to leaf x, named by child vertex."""
    path = []
    u = x
    while u != v:
        path.append(u)
        u = tree.parent[u]
    return tuple(reversed(path))


def is_good(tree: PhyloTree, coloring: LossColoring, tup, c1: int, c2: int) -> bool:
    """Goodness of one tuple against disjoint color sets (bitmasks)."""
    x, v, e = tup
    path = path_between(tree, v, x)
    if any(p not in coloring.eligible for p in path):
        return False
    if not coloring.path_has_unique_colors(path):
        return False
    if coloring.path_mask(path) & ~c1:
        return False
    return bool(coloring.key_bit(e) & c2)


def candidate_tuples(tree: PhyloTree, coloring: LossColoring, idx: DerivedIndex,
                     q: int):
    """Tuples with the taxon due within class q that any good set may use:
    eligible unique-color path whose colors avoid the sibling key color."""
    out = []
    for x, v, e, path in anchored_tuples(tree):
        if idx.class_of[x] > q:
            continue
        if any(p not in coloring.eligible for p in path):
            continue
        if not coloring.path_has_unique_colors(path):
            continue
        if coloring.key_bit(e) & coloring.path_mask(path):
            continue
        out.append((x, v, e, path))
    return out


def is_q_grounding(c1: int, c2: int, q: int, coloring: LossColoring,
                   idx: DerivedIndex) -> bool:
    """No candidate tuple for class q is good: the recursion bottoms out."""
    if c1 & c2:
        raise RescuePDError("grounding is defined for disjoint color sets")
    tree = idx.instance.tree
    for x, v, e, path in candidate_tuples(tree, coloring, idx, q):
        if coloring.path_mask(path) & ~c1 == 0 and coloring.key_bit(e) & c2:
            return False
    return True


def find_valid_ordering(tree: PhyloTree, coloring: LossColoring, anchored,
                        deadline_of):
    """Extinction-ordered insertion sequence, or None.

    At each step any remaining tuple with the smallest deadline may come
    next provided its sibling key color avoids every path color seen so far
    (including its own path); ties are explored with backtracking.
    """
    items = list(anchored)
    n = len(items)
    used = [False] * n
    order = []

    def rec(seen_mask):
        if len(order) == n:
            return True
        best = min(deadline_of(items[i][0]) for i in range(n) if not used[i])
        for i in range(n):
            if used[i] or deadline_of(items[i][0]) != best:
                continue
            x, v, e = items[i]
            new_mask = seen_mask | coloring.path_mask(path_between(tree, v, x))
            if coloring.key_bit(e) & new_mask:
                continue
            used[i] = True
            order.append(items[i])
            if rec(new_mask):
                return True
            used[i] = False
            order.pop()
        return False

    return tuple(order) if rec(0) else None


def check_color_respectful(anchored, coloring: LossColoring, idx: DerivedIndex) -> bool:
    """All five structural color conditions on an anchored taxa set."""
    tree = idx.instance.tree
    paths = [path_between(tree, v, x) for x, v, e in anchored]
    plus = set()
    for p in paths:
        plus.update(p)
    total = sum(coloring.color_mask(e).bit_count() for e in plus)
    union = 0
    for e in plus:
        union |= coloring.color_mask(e)
    if total != union.bit_count():
        return False
    keys = [coloring.key_color[e] for _, _, e in anchored]
    if len(set(keys)) != len(keys):
        return False
    if any(e not in coloring.eligible for e in plus):
        return False
    seen = set()
    for p in paths:
        if seen & set(p):
            return False
        seen.update(p)
    return find_valid_ordering(tree, coloring, anchored,
                               lambda x: idx.instance.deadline(x)) is not None


def loss_table_entry_count(loss: int, n_classes: int) -> int:
    """Exact size of the full dynamic-programming table."""
    return sum(math.comb(2 * loss, k) * 2 ** (2 * loss - k)
               for k in range(loss + 1)) * n_classes


class _LossDP:
    """Full-table dynamic program over (path colors, sibling colors, class)."""

    def __init__(self, idx: DerivedIndex, coloring: LossColoring, loss: int):
        self.idx = idx
        self.coloring = coloring
        self.loss = loss
        self.bits = 2 * loss
        self.full = (1 << self.bits) - 1
        self.nc = idx.n_classes
        tree = idx.instance.tree
        self.tuples = []
        for x, v, e, path in candidate_tuples(tree, coloring, idx, self.nc - 1):
            self.tuples.append((idx.class_of[x], idx.instance.length(x),
                                coloring.path_mask(path), coloring.key_bit(e),
                                (x, v, e)))
        d = idx.deficits
        self.segmax = [[max(d[a:b + 1]) if a <= b else MINF
                        for b in range(self.nc)] for a in range(self.nc)]
        self.table = {}
        self.entries = 0

    def _key(self, c1, c2, q):
        return ((c1 << self.bits) | c2) * 16 + q

    def run(self):
        for pc in range(self.loss + 1):
            for c1 in _masks_of_popcount(self.bits, pc):
                self._fill_c1(c1)

    def _fill_c1(self, c1):
        nc = self.nc
        defs = self.idx.deficits
        cand = [t for t in self.tuples if t[2] & ~c1 == 0]
        base = []
        ok = True
        for q in range(nc):
            if q > 0 and defs[q - 1] > 0:
                ok = False
            base.append(0 if ok else MINF)
        per_class: list[list] = [[] for _ in range(nc)]
        for t in cand:
            per_class[t[0]].append(t)
        ground_keys = []   # per q: OR of sibling key bits over classes <= q
        by_class = []      # per q: candidates over classes <= q
        running, acc = 0, []
        for q in range(nc):
            for t in per_class[q]:
                running |= t[3]
            acc = acc + per_class[q]
            ground_keys.append(running)
            by_class.append(acc)
        comp = self.full ^ c1
        table, key = self.table, self._key
        for q in range(nc):
            gk = ground_keys[q]
            bq = base[q]
            cands = by_class[q]
            seg = self.segmax
            c2 = comp
            while True:
                if c2 & gk == 0:
                    table[key(c1, c2, q)] = bq
                else:
                    best = MINF
                    for cls_t, ell_t, pmask, kbit, _ in cands:
                        if not kbit & c2:
                            continue
                        child = table[key(c1 & ~pmask, (c2 | pmask) & ~kbit, cls_t)]
                        if child == MINF:
                            continue
                        val = child + ell_t
                        if val > best and (cls_t > q - 1 or val >= seg[cls_t][q - 1]):
                            best = val
                    table[key(c1, c2, q)] = best
                self.entries += 1
                if c2 == 0:
                    break
                c2 = (c2 - 1) & comp

    def accept(self):
        """First (c1, c2) cell meeting the final deficit, scan order fixed."""
        last = self.nc - 1
        threshold = self.idx.deficits[last]
        for pc in range(self.loss + 1):
            for c1 in _masks_of_popcount(self.bits, pc):
                comp = self.full ^ c1
                c2 = comp
                while True:
                    if self.table[self._key(c1, c2, last)] >= threshold:
                        return c1, c2
                    if c2 == 0:
                        break
                    c2 = (c2 - 1) & comp
        return None

    def extract(self, c1, c2):
        """Backtrack one qualifying cell into an anchored taxa set."""
        anchored = []
        q = self.nc - 1
        while True:
            val = self.table[self._key(c1, c2, q)]
            cand = [t for t in self.tuples
                    if t[2] & ~c1 == 0 and t[0] <= q and t[3] & c2]
            gk = 0
            for t in cand:
                gk |= t[3]
            if c2 & gk == 0:
                if val != 0:  # pragma: no cover
                    raise RescuePDError("loss table backtrack hit a bad base")
                return anchored
            step = None
            for cls_t, ell_t, pmask, kbit, tup in cand:
                child = self.table[self._key(c1 & ~pmask, (c2 | pmask) & ~kbit, cls_t)]
                if child == MINF or child + ell_t != val:
                    continue
                if cls_t <= q - 1 and val < self.segmax[cls_t][q - 1]:
                    continue
                step = (cls_t, pmask, kbit, tup)
                break
            if step is None:  # pragma: no cover
                raise RescuePDError("loss table backtrack failed")
            cls_t, pmask, kbit, tup = step
            anchored.append(tup)
            c1, c2, q = c1 & ~pmask, (c2 | pmask) & ~kbit, cls_t


def _masks_of_popcount(bits, pc):
    for positions in itertools.combinations(range(bits), pc):
        m = 0
        for p in positions:
            m |= 1 << p
        yield m


def loss_dp_solve(instance: Instance, coloring: LossColoring, loss: int,
                  idx: DerivedIndex = None):
    """Colored decision: (found, anchored set or None, table entry count)."""
    if not instance.tree.is_binary():
        raise NonBinaryTree("the loss-parameterized solver needs a binary tree; "
                            "use the target-diversity or brute-force solver")
    if idx is None:
        idx = build_derived_index(instance)
    dp = _LossDP(idx, coloring, loss)
    dp.run()
    cell = dp.accept()
    if cell is None:
        return False, None, dp.entries
    return True, dp.extract(*cell), dp.entries


def anchored_set_for_sacrifice(tree: PhyloTree, sacrificed, deadline_of):
    """Iterative witness construction for a nonempty sacrifice set.

    Taxa are added in deadline order; each step anchors at the top of the
    newly dead path segment, and the sibling edge is either the path edge of
    the next tuple sharing the anchor or the first still-alive outgoing
    edge.  The union of the anchored paths equals the dead edge set.
    """
    xs = sorted(sacrificed, key=lambda x: (deadline_of(x), x))
    if not xs:
        return []
    if set(xs) == set(tree.taxa):
        raise RescuePDError("anchoring is undefined when every taxon is sacrificed")
    alive = {}
    for v in reversed(tree.preorder()):
        cs = tree.children.get(v, ())
        alive[v] = sum(alive[c] for c in cs) if cs else 1
    step_died: dict = {}   # edge (child vertex) -> step at which it died
    anchors = []           # (x_i, v_i, w_i)
    for i, x in enumerate(xs):
        alive[x] -= 1
        a = x
        while a != tree.root:
            a = tree.parent[a]
            alive[a] -= 1
        # the newly dead edges form a contiguous path segment above x
        top = x
        u = x
        while alive[u] == 0:
            step_died[u] = i
            top = u
            if tree.parent[u] == tree.root:
                break
            u = tree.parent[u]
        anchors.append((x, tree.parent[top], top))
    tuples = []
    for i, (x, v, w) in enumerate(anchors):
        sibling = None
        for j in range(i + 1, len(anchors)):
            if anchors[j][1] == v:
                sibling = anchors[j][2]
                break
        if sibling is None:
            # any outgoing edge still alive right after step i works
            for c in tree.children[v]:
                if step_died.get(c, len(xs)) > i:
                    sibling = c
                    break
        if sibling is None:  # pragma: no cover - impossible for proper subsets
            raise RescuePDError(f"no live sibling edge at anchor {v!r}")
        tuples.append((x, v, sibling))
    return tuples


def injective_coloring(tree: PhyloTree) -> LossColoring:
    """Every edge gets globally fresh colors; useful for structural checks."""
    key, extras = {}, {}
    nxt = 1
    for e in tree.edge_order:
        key[e] = nxt
        mask = 0
        for _ in range(tree.weight[e] - 1):
            nxt += 1
            mask |= 1 << (nxt - 1)
        extras[e] = mask
        nxt += 1
    half = max(1, (nxt + 1) // 2)
    return LossColoring(2 * half, key, extras, frozenset(tree.edge_order))


def solve_time_pd_by_loss(instance: Instance, delta: float = 1e-3, seed: int = 0,
                          mask_limit: int = LOSS_LIMIT) -> SolveOutcome:
    """Randomized loss-parameterized solver, collaborative mode.

    One-sided like the target solver: yes answers ship verified witnesses,
    a no is wrong with probability at most delta.  Loss budget zero needs
    no colors: saving everything either works or nothing does.
    """
    idx = build_derived_index(instance)
    check = classify_trivial(instance, idx)
    if check.kind == "no":
        return SolveOutcome(False, "fpt-dbar", value=idx.pd_total, trials=0,
                            diagnostics={"trivial": "target exceeds total diversity"})
    if check.kind == "yes":
        sched = build_collaborative_schedule(idx, ())
        return SolveOutcome(True, "fpt-dbar", saved=(), schedule=sched, value=0,
                            trials=0, diagnostics={"trivial": "target is zero"})
    if not instance.tree.is_binary():
        raise NonBinaryTree("the loss-parameterized solver needs a binary tree; "
                            "use the target-diversity or brute-force solver")
    loss = idx.loss_budget
    if loss == 0:
        if collaborative_feasible(idx, instance.tree.taxa):
            saved = instance.tree.taxa
            sched = build_collaborative_schedule(idx, saved)
            return SolveOutcome(True, "fpt-dbar", saved=saved, schedule=sched,
                                value=idx.pd_total, trials=0, seed=seed)
        return SolveOutcome(False, "fpt-dbar", trials=0, seed=seed,
                            diagnostics={"deterministic": "zero loss budget"})
    if loss > mask_limit:
        raise LossTooLarge(f"loss budget {loss} exceeds the mask-width limit {mask_limit}")
    tree = instance.tree
    small = [e for e in tree.edge_order if tree.weight[e] <= loss]
    big = [e for e in tree.edge_order if tree.weight[e] > loss]
    ordered = small + big
    n_edges = len(ordered)
    width = n_edges + sum(tree.weight[e] - 1 for e in small)
    n_trials = trial_count(2 * loss, delta)
    entries = None
    for trial in range(1, n_trials + 1):
        rng = _trial_rng(seed, trial)
        f = rng.integers(1, 2 * loss + 1, size=width + 1)
        key = {e: int(f[j + 1]) for j, e in enumerate(ordered)}
        extras = {}
        pos = n_edges
        for e in small:
            mask = 0
            for _ in range(tree.weight[e] - 1):
                pos += 1
                mask |= 1 << (int(f[pos]) - 1)
            extras[e] = mask
        coloring = make_loss_coloring(tree, loss, key, extras)
        found, anchored, entries = loss_dp_solve(instance, coloring, loss, idx)
        if found:
            sacrificed = {x for x, _, _ in anchored}
            saved = canon(set(tree.taxa) - sacrificed)
            if pd_of_subset(tree, saved) < instance.target:  # pragma: no cover
                raise RescuePDError("loss witness failed the diversity re-check")
            if not collaborative_feasible(idx, saved):  # pragma: no cover
                raise RescuePDError("loss witness failed the feasibility re-check")
            sched = build_collaborative_schedule(idx, saved)
            return SolveOutcome(True, "fpt-dbar", saved=saved, schedule=sched,
                                value=pd_of_subset(tree, saved), trials=trial,
                                seed=seed,
                                diagnostics={"planned_trials": n_trials,
                                             "table_entries": entries})
    return SolveOutcome(False, "fpt-dbar", trials=n_trials, seed=seed,
                        diagnostics={"planned_trials": n_trials, "delta": delta,
                                     "table_entries": entries})
