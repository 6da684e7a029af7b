"""Color-coding solvers parameterized by the target diversity.

Each edge of weight w receives up to w colors from a palette whose size is
the target; a set of taxa wins iff the union of colors on root paths covers
the whole palette and the set passes the mode's feasibility test.  Covering
the palette certifies diversity at least the palette size, so a colored
"yes" is sound; randomized trials over seeded colorings make missing a true
solution unlikely (a fixed witness is hit with probability >= e^-k per
trial, hence ceil(e^k * ln(1/delta)) trials bound the false-no rate by
delta).

The colored decision itself is exact dynamic programming over color masks:
taxa are added in deadline order and a capacity check against the prefix
hours keeps every partial selection schedulable.  The strict variant runs
the mask DP per team and merges teams with the boolean cover product.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cover import boolean_cover_combine
from .errors import BadParams, RescuePDError, TargetTooLarge
from .feasibility import (Schedule, build_collaborative_schedule,
                          collaborative_feasible, schedule_team_parts,
                          verify_schedule)
from .model import (STRICT, DerivedIndex, Instance, PhyloTree,
                    build_derived_index, canon, classify_trivial,
                    pd_of_subset, savable_alone)
from .outcome import SolveOutcome

INF = 2**62  # saturating sentinel; real values stay far below

MASK_LIMIT = 30


@dataclass(frozen=True)
class TargetColoring:
    """Per-edge color sets (bitmasks) drawn from a palette of n_colors."""

    n_colors: int
    edge_colors: dict  # edge (child vertex) -> bitmask

    def taxon_masks(self, tree: PhyloTree) -> dict:
        """Union of edge colors along each root-to-leaf path."""
        masks = {}
        for x in tree.taxa:
            m = 0
            for e in tree.root_path(x):
                m |= self.edge_colors[e]
            masks[x] = m
        return masks


def color_edges_from_hash(tree: PhyloTree, n_colors: int, f) -> TargetColoring:
    """Slice a function on [W] into per-edge color sets.

    Edge j (canonical order) with weight w_j gets the colors at positions
    W_{j-1}+1 .. W_j, where W_j are the weight prefix sums.  ``f`` is
    callable or indexable with 1-based positions; repeated colors within an
    edge collapse, so an edge may end up with fewer colors than its weight.
    """
    pick = f if callable(f) else f.__getitem__
    edge_colors = {}
    pos = 0
    for e in tree.edge_order:
        m = 0
        for _ in range(tree.weight[e]):
            pos += 1
            c = pick(pos)
            if not 1 <= c <= n_colors:
                raise BadParams(f"color {c} outside palette [1, {n_colors}]")
            m |= 1 << (c - 1)
        edge_colors[e] = m
    return TargetColoring(n_colors, edge_colors)


def _taxa_arrays(idx: DerivedIndex, coloring: TargetColoring):
    masks = coloring.taxon_masks(idx.instance.tree)
    labels = list(idx.order)
    return (labels,
            [masks[x] for x in labels],
            [idx.class_of[x] for x in labels],
            [idx.instance.length(x) for x in labels])


def solve_colored_time_pd(idx: DerivedIndex, coloring: TargetColoring):
    """Exact decision for one coloring, collaborative mode.

    Returns (True, saved set) when some feasible set covers the palette,
    else (False, None).  Table entry [C][p]: minimum total rescue length of
    a set within the first p+1 classes covering C, kept schedulable by the
    prefix-hours capacity check at every extension.
    """
    labels, masks, cls, ell = _taxa_arrays(idx, coloring)
    nc = idx.n_classes
    hours = idx.hours
    k = coloring.n_colors
    if k == 0:
        return True, ()
    full = (1 << k) - 1
    dp = [None] * (full + 1)
    dp[0] = [0] * nc
    for mask in range(1, full + 1):
        tmp = [INF] * nc
        for t, m in enumerate(masks):
            if m & mask == 0:
                continue
            q = cls[t]
            prev = dp[mask & ~m][q]
            if prev >= INF:
                continue
            cand = prev + ell[t]
            if cand <= hours[q] and cand < tmp[q]:
                tmp[q] = cand
        run = INF
        row = []
        for q in range(nc):
            if tmp[q] < run:
                run = tmp[q]
            row.append(run)
        dp[mask] = row
    if dp[full][nc - 1] >= INF:
        return False, None
    saved = []
    mask, p = full, nc - 1
    while mask:
        goal = dp[mask][p]
        for t, m in enumerate(masks):
            if m & mask == 0 or cls[t] > p:
                continue
            q = cls[t]
            prev = dp[mask & ~m][q]
            if prev < INF and prev + ell[t] == goal and goal <= hours[q]:
                saved.append(labels[t])
                mask, p = mask & ~m, q
                break
        else:  # pragma: no cover - the table always backtracks
            raise RescuePDError("witness backtrack failed")
    return True, canon(saved)


def solve_colored_s_time_pd(idx: DerivedIndex, coloring: TargetColoring,
                            capacity_rule: str = "added-class"):
    """Exact decision for one coloring, strict mode.

    Per-team mask tables as in the collaborative DP but against the team's
    own prefix hours; teams are combined by the boolean cover product.
    Returns (True, per-team parts) or (False, None).

    capacity_rule selects the bound used when taxon x of class p extends a
    partial set of top class q <= p: "added-class" checks the team's hours
    up to class p (the default; cross-validated against the strict oracle),
    "printed" checks up to class q (kept for comparison experiments).
    """
    labels, masks, cls, ell = _taxa_arrays(idx, coloring)
    nc = idx.n_classes
    k = coloring.n_colors
    n_teams = len(idx.instance.teams)
    if k == 0:
        return True, tuple(() for _ in range(n_teams))
    full = (1 << k) - 1
    team_dp = []   # per team: dp0[mask] = row over classes (no prefix min)
    team_pm = []   # per team: prefix-min over classes
    team_bits = []
    for i in range(n_teams):
        th = idx.team_hours[i]
        dp0 = [None] * (full + 1)
        pm = [None] * (full + 1)
        dp0[0] = [0] * nc
        pm[0] = [0] * nc
        for mask in range(1, full + 1):
            tmp = [INF] * nc
            for t, m in enumerate(masks):
                if m & mask == 0:
                    continue
                p = cls[t]
                sub = mask & ~m
                if capacity_rule == "added-class":
                    prev = pm[sub][p]
                    if prev >= INF:
                        continue
                    cand = prev + ell[t]
                    if cand <= th[p] and cand < tmp[p]:
                        tmp[p] = cand
                else:
                    for q in range(p + 1):
                        prev = dp0[sub][q]
                        if prev >= INF:
                            continue
                        cand = prev + ell[t]
                        if cand <= th[q] and cand < tmp[p]:
                            tmp[p] = cand
            dp0[mask] = tmp
            run = INF
            pm[mask] = [run := min(run, v) for v in tmp]
        team_dp.append(dp0)
        team_pm.append(pm)
        team_bits.append([1 if pm[mask][nc - 1] < INF else 0
                          for mask in range(full + 1)])
    stages = [team_bits[0]]
    for i in range(1, n_teams):
        stages.append(boolean_cover_combine(stages[-1], team_bits[i]))
    if not stages[-1][full]:
        return False, None

    def extract(i, mask):
        part = []
        if mask == 0:
            return part
        pm, dp0, th = team_pm[i], team_dp[i], idx.team_hours[i]
        p = min(q for q in range(nc) if dp0[mask][q] < INF)
        while mask:
            goal = dp0[mask][p]
            for t, m in enumerate(masks):
                if m & mask == 0 or cls[t] != p:
                    continue
                sub = mask & ~m
                if capacity_rule == "added-class":
                    prev = pm[sub][p]
                    bound_ok = prev < INF and prev + ell[t] == goal and goal <= th[p]
                    if not bound_ok:
                        continue
                    q = min(qq for qq in range(p + 1) if dp0[sub][qq] == prev)
                else:
                    found = None
                    for qq in range(p + 1):
                        prev = dp0[sub][qq]
                        if prev < INF and prev + ell[t] == goal and goal <= th[qq]:
                            found = qq
                            break
                    if found is None:
                        continue
                    q = found
                part.append(labels[t])
                mask, p = sub, q
                break
            else:  # pragma: no cover
                raise RescuePDError("strict witness backtrack failed")
        return part

    parts = [None] * n_teams
    mask = full
    for i in range(n_teams - 1, 0, -1):
        sub = mask
        choice = None
        while True:
            if stages[i - 1][sub] and team_bits[i][mask ^ sub]:
                choice = sub
                break
            if sub == 0:
                break
            sub = (sub - 1) & mask
        if choice is None:  # pragma: no cover
            raise RescuePDError("cover backtrack failed")
        parts[i] = extract(i, mask ^ choice)
        mask = choice
    parts[0] = extract(0, mask)
    used = set()
    clean = []
    for part in parts:
        keep = [x for x in part if x not in used]
        used.update(keep)
        clean.append(tuple(keep))
    return True, tuple(clean)


def trial_count(n_colors: int, delta: float) -> int:
    """ceil(e^k * ln(1/delta)) independent colorings."""
    if not 0 < delta < 1:
        raise BadParams(f"delta must be in (0, 1), got {delta}")
    return math.ceil(math.exp(n_colors) * math.log(1 / delta))


def _trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, trial])))


def _certify(instance, idx, saved, value_needed):
    if pd_of_subset(instance.tree, saved) < value_needed:
        raise RescuePDError("witness failed the diversity re-check")
    if not collaborative_feasible(idx, saved):
        raise RescuePDError("witness failed the feasibility re-check")


def _trivial_outcome(instance, idx, algorithm):
    check = classify_trivial(instance, idx)
    if check.kind == "no":
        return SolveOutcome(False, algorithm, value=idx.pd_total, trials=0,
                            diagnostics={"trivial": "target exceeds total diversity"})
    if check.kind == "yes":
        sched = build_collaborative_schedule(idx, ())
        if instance.mode == STRICT:
            sched = Schedule(STRICT, {}, ())
        return SolveOutcome(True, algorithm, saved=(), schedule=sched, value=0,
                            trials=0, diagnostics={"trivial": "target is zero"})
    return None


def _singleton_shortcut(instance, idx, algorithm):
    """Any savable taxon whose root path already meets the target is a yes.

    This also covers the heavy-edge shortcut: an edge at least as heavy as
    the target with a savable offspring yields such a taxon.
    """
    best = None
    for x in instance.tree.taxa:
        if not savable_alone(instance, idx, x):
            continue
        value = pd_of_subset(instance.tree, [x])
        if value >= instance.target and (best is None or value > best[0]):
            best = (value, x)
    if best is None:
        return None
    value, x = best
    if instance.mode == STRICT:
        for i, t in enumerate(instance.teams):
            if t.hours_until(instance.deadline(x)) >= instance.length(x):
                sched = schedule_team_parts(
                    instance, [[x] if j == i else [] for j in range(len(instance.teams))])
                break
    else:
        sched = build_collaborative_schedule(idx, [x])
    return SolveOutcome(True, algorithm, saved=(x,), schedule=sched, value=value,
                        trials=0, diagnostics={"shortcut": "single taxon"})


def solve_time_pd_by_target(instance: Instance, delta: float = 1e-3,
                            seed: int = 0, mask_limit: int = MASK_LIMIT) -> SolveOutcome:
    """Randomized color-coding solver, collaborative mode.

    One-sided: every yes ships a re-verified witness; a no is wrong with
    probability at most delta.
    """
    idx = build_derived_index(instance)
    out = _trivial_outcome(instance, idx, "fpt-d")
    if out is None:
        out = _singleton_shortcut(instance, idx, "fpt-d")
    if out is not None:
        out.seed = seed
        return out
    k = instance.target
    if k > mask_limit:
        raise TargetTooLarge(f"target {k} exceeds the mask-width limit {mask_limit}")
    tree = instance.tree
    width = tree.total_weight()
    n_trials = trial_count(k, delta)
    for trial in range(1, n_trials + 1):
        rng = _trial_rng(seed, trial)
        f = rng.integers(1, k + 1, size=width + 1)
        coloring = color_edges_from_hash(tree, k, f)
        ok, saved = solve_colored_time_pd(idx, coloring)
        if ok:
            _certify(instance, idx, saved, k)
            sched = build_collaborative_schedule(idx, saved)
            return SolveOutcome(True, "fpt-d", saved=saved, schedule=sched,
                                value=pd_of_subset(tree, saved), trials=trial,
                                seed=seed, diagnostics={"planned_trials": n_trials})
    return SolveOutcome(False, "fpt-d", trials=n_trials, seed=seed,
                        diagnostics={"planned_trials": n_trials, "delta": delta})


def solve_s_time_pd_by_target(instance: Instance, delta: float = 1e-3,
                              seed: int = 0, mask_limit: int = MASK_LIMIT) -> SolveOutcome:
    """Randomized color-coding solver, strict mode (same contract)."""
    idx = build_derived_index(instance)
    out = _trivial_outcome(instance, idx, "fpt-d")
    if out is None:
        out = _singleton_shortcut(instance, idx, "fpt-d")
    if out is not None:
        out.seed = seed
        return out
    k = instance.target
    if k > mask_limit:
        raise TargetTooLarge(f"target {k} exceeds the mask-width limit {mask_limit}")
    tree = instance.tree
    width = tree.total_weight()
    n_trials = trial_count(k, delta)
    for trial in range(1, n_trials + 1):
        rng = _trial_rng(seed, trial)
        f = rng.integers(1, k + 1, size=width + 1)
        coloring = color_edges_from_hash(tree, k, f)
        ok, parts = solve_colored_s_time_pd(idx, coloring)
        if ok:
            saved = canon(x for part in parts for x in part)
            sched = schedule_team_parts(instance, parts)
            report = verify_schedule(instance, sched)
            if not report.ok:  # pragma: no cover
                raise RescuePDError("strict witness failed verification")
            if pd_of_subset(tree, saved) < k:  # pragma: no cover
                raise RescuePDError("witness failed the diversity re-check")
            return SolveOutcome(True, "fpt-d", saved=saved, schedule=sched,
                                value=pd_of_subset(tree, saved), trials=trial,
                                seed=seed, diagnostics={"planned_trials": n_trials})
    return SolveOutcome(False, "fpt-d", trials=n_trials, seed=seed,
                        diagnostics={"planned_trials": n_trials, "delta": delta})
