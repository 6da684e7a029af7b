"""Tree dynamic programs over person-hour budget vectors.

Three exact solvers sharing one skeleton: walk the tree bottom-up, tracking
for each vertex and each remaining budget the best diversity achievable in
that subtree, with a flag b telling whether at least one taxon below is
saved (only then does the vertex's own edge count toward an ancestor).
Children consume disjoint shares of the budget; shares are enumerated child
by child through an auxiliary prefix table.

Budget flavors:

* team counts per timeslot (collaborative) - a leaf is savable when the
  slots up to its deadline carry enough team-hours in total;
* hour budgets per deadline class (collaborative) - a leaf consumes its
  rescue length from every class at or after its own;
* team subsets per timeslot (strict) - a leaf needs one team granted for
  enough consecutive slots ending by its deadline.

Budgets are canonicalized against what a subtree can actually use, which
keeps the memoized state space near the reachable minimum.  Splits are
enumerated in mixed-radix little-endian order for determinism.
"""

from __future__ import annotations

import itertools

from .errors import StateSpaceTooLarge
from .feasibility import Schedule, build_collaborative_schedule, verify_schedule
from .model import (STRICT, Instance, build_derived_index, canon,
                    classify_trivial, pd_of_subset)
from .outcome import SolveOutcome

NEG = -(2**62)

STATE_GUARD = 10_000_000


class _BudgetDP:
    """Shared engine; subclasses define the budget algebra and leaf rule."""

    algorithm = "budget"

    def __init__(self, instance: Instance):
        self.instance = instance
        self.idx = build_derived_index(instance)
        self.tree = instance.tree
        self.memo = {}
        self.pmemo = {}

    # budget algebra -----------------------------------------------------
    def root_budget(self):
        raise NotImplementedError

    def canon_budget(self, v, budget):
        raise NotImplementedError

    def leaf_options(self, x, budget):
        """Yield (consumed share, leaf detail) for ways to save leaf x."""
        raise NotImplementedError

    def subtract(self, budget, share):
        raise NotImplementedError

    def child_shares(self, budget):
        """Every share a child may take, mixed-radix little-endian order."""
        raise NotImplementedError

    # engine -------------------------------------------------------------
    def value(self, v, budget, b):
        if b == 0:
            return 0
        budget = self.canon_budget(v, budget)
        key = (v, budget)
        got = self.memo.get(key)
        if got is not None:
            return got
        cs = self.tree.children.get(v, ())
        if not cs:
            best = NEG
            for share, _ in self.leaf_options(v, budget):
                best = 0
                break
            self.memo[key] = best
            return best
        best = self.prefix_value(v, len(cs), budget, 1)
        self.memo[key] = best
        return best

    def prefix_value(self, v, i, budget, b):
        """Best over the first i children of v."""
        cs = self.tree.children[v]
        u = cs[i - 1]
        w = self.tree.weight[u]
        if i == 1:
            sub = self.value(u, budget, b)
            return sub + w * b if sub > NEG else (0 if b == 0 else NEG)
        if b == 0:
            return 0
        budget = self.canon_budget(v, budget)
        key = (v, i, budget)
        got = self.pmemo.get(key)
        if got is not None:
            return got
        best = NEG
        if self.tree.children.get(u):
            shares = self.child_shares(budget)
        else:
            shares = [share for share, _ in self.leaf_options(u, budget)]
        # b2 = 1 with every share the child can use
        for share in shares:
            sub = self.value(u, self.canon_budget(u, share), 1)
            if sub <= NEG:
                continue
            rest = self.subtract(budget, share)
            for b1 in (0, 1):
                head = self.prefix_value(v, i - 1, rest, b1)
                if head <= NEG:
                    continue
                cand = head + sub + w
                if cand > best:
                    best = cand
        # b2 = 0: child gets nothing
        head = self.prefix_value(v, i - 1, budget, 1)
        if head > best:
            best = head
        self.pmemo[key] = best
        return best

    # witness --------------------------------------------------------------
    def collect(self, v, budget, b, saved, details):
        if b == 0:
            return
        budget = self.canon_budget(v, budget)
        cs = self.tree.children.get(v, ())
        if not cs:
            for share, detail in self.leaf_options(v, budget):
                saved.append(v)
                details[v] = detail
                return
            raise AssertionError("collect reached an unsavable leaf")
        self.collect_prefix(v, len(cs), budget, 1, saved, details)

    def collect_prefix(self, v, i, budget, b, saved, details):
        target = self.prefix_value(v, i, budget, b)
        cs = self.tree.children[v]
        u = cs[i - 1]
        w = self.tree.weight[u]
        if i == 1:
            if b == 1:
                self.collect(u, budget, 1, saved, details)
            return
        if b == 0:
            return
        budget = self.canon_budget(v, budget)
        if self.tree.children.get(u):
            shares = self.child_shares(budget)
        else:
            shares = [share for share, _ in self.leaf_options(u, budget)]
        for share in shares:
            sub = self.value(u, self.canon_budget(u, share), 1)
            if sub <= NEG:
                continue
            rest = self.subtract(budget, share)
            for b1 in (0, 1):
                head = self.prefix_value(v, i - 1, rest, b1)
                if head > NEG and head + sub + w == target:
                    self.collect(u, share, 1, saved, details)
                    self.collect_prefix(v, i - 1, rest, b1, saved, details)
                    return
        if self.prefix_value(v, i - 1, budget, 1) == target:
            self.collect_prefix(v, i - 1, budget, 1, saved, details)
            return
        raise AssertionError("budget DP witness backtrack failed")

    # entry point ----------------------------------------------------------
    def solve(self) -> SolveOutcome:
        instance, idx = self.instance, self.idx
        check = classify_trivial(instance, idx)
        if check.kind == "no":
            return SolveOutcome(False, self.algorithm, value=idx.pd_total,
                                diagnostics={"trivial": "target exceeds total diversity"})
        if check.kind == "yes":
            sched = (Schedule(STRICT, {}, ()) if instance.mode == STRICT
                     else build_collaborative_schedule(idx, ()))
            return SolveOutcome(True, self.algorithm, saved=(), schedule=sched,
                                value=0, diagnostics={"trivial": "target is zero"})
        root_budget = self.root_budget()
        best = self.value(self.tree.root, root_budget, 1)
        decision = best > NEG and best >= instance.target
        if not decision:
            return SolveOutcome(False, self.algorithm,
                                value=best if best > NEG else 0,
                                diagnostics={"states": len(self.memo)})
        saved, details = [], {}
        self.collect(self.tree.root, root_budget, 1, saved, details)
        saved = canon(saved)
        sched = self.witness_schedule(saved, details)
        report = verify_schedule(instance, sched)
        if not report.ok or pd_of_subset(self.tree, saved) < instance.target:
            raise AssertionError("budget DP witness failed verification")
        return SolveOutcome(True, self.algorithm, saved=saved, schedule=sched,
                            value=pd_of_subset(self.tree, saved),
                            diagnostics={"states": len(self.memo)})

    def witness_schedule(self, saved, details) -> Schedule:
        return build_collaborative_schedule(self.idx, saved)


class _TeamCountDP(_BudgetDP):
    """Budgets = available team count per timeslot (collaborative)."""

    algorithm = "hours-teams"

    def __init__(self, instance, guard=STATE_GUARD):
        super().__init__(instance)
        self.horizon = self.idx.max_ex
        if (len(instance.teams) + 1) ** self.horizon > guard:
            raise StateSpaceTooLarge(
                f"(|T|+1)^{self.horizon} budget vectors exceed the guard {guard}")
        # per-vertex per-slot cap: hours usable at slot j by the subtree
        deadlines = {}
        for v in reversed(self.tree.preorder()):
            cs = self.tree.children.get(v, ())
            if not cs:
                deadlines[v] = [(instance.deadline(v), instance.length(v))]
            else:
                merged = {}
                for c in cs:
                    for d, l in deadlines[c]:
                        merged[d] = merged.get(d, 0) + l
                deadlines[v] = sorted(merged.items())
        self.slot_caps = {}
        for v, pairs in deadlines.items():
            caps = []
            for j in range(1, self.horizon + 1):
                caps.append(sum(l for d, l in pairs if d >= j))
            self.slot_caps[v] = caps

    def root_budget(self):
        counts = [0] * self.horizon
        for t in self.instance.teams:
            for j in range(t.start + 1, min(t.end, self.horizon) + 1):
                counts[j - 1] += 1
        return tuple(counts)

    def canon_budget(self, v, budget):
        caps = self.slot_caps[v]
        return tuple(min(a, c) for a, c in zip(budget, caps))

    def leaf_options(self, x, budget):
        deadline = min(self.instance.deadline(x), self.horizon)
        need = self.instance.length(x)
        if sum(budget[:deadline]) < need:
            return
        share = [0] * self.horizon
        for j in range(deadline - 1, -1, -1):   # latest slots first
            take = min(budget[j], need)
            share[j] = take
            need -= take
            if need == 0:
                break
        yield tuple(share), tuple(share)

    def subtract(self, budget, share):
        return tuple(a - d for a, d in zip(budget, share))

    def child_shares(self, budget):
        return [tuple(reversed(s)) for s in
                itertools.product(*[range(a + 1) for a in reversed(budget)])]


class _HourBudgetDP(_BudgetDP):
    """Budgets = person-hours per deadline class prefix (collaborative)."""

    algorithm = "hours-budget"

    def __init__(self, instance, guard=STATE_GUARD):
        super().__init__(instance)
        space = 1
        for h in self.idx.hours:
            space *= h + 1
            if space > guard:
                raise StateSpaceTooLarge(
                    f"hour-budget vectors exceed the guard {guard}")
        # per-vertex per-class cap: total length of subtree taxa due by class
        idx = self.idx
        self.class_caps = {}
        for v in reversed(self.tree.preorder()):
            cs = self.tree.children.get(v, ())
            if not cs:
                caps = [0] * idx.n_classes
                for k in range(idx.class_of[v], idx.n_classes):
                    caps[k] = self.instance.length(v)
            else:
                caps = [0] * idx.n_classes
                for c in cs:
                    for k, val in enumerate(self.class_caps[c]):
                        caps[k] += val
            self.class_caps[v] = caps

    def root_budget(self):
        return tuple(self.idx.hours)

    def canon_budget(self, v, budget):
        return tuple(min(a, c) for a, c in zip(budget, self.class_caps[v]))

    def leaf_options(self, x, budget):
        k = self.idx.class_of[x]
        need = self.instance.length(x)
        if all(budget[j] >= need for j in range(k, self.idx.n_classes)):
            share = tuple(need if j >= k else 0 for j in range(self.idx.n_classes))
            yield share, share

    def subtract(self, budget, share):
        return tuple(a - d for a, d in zip(budget, share))

    def child_shares(self, budget):
        return [tuple(reversed(s)) for s in
                itertools.product(*[range(a + 1) for a in reversed(budget)])]


class _TeamSubsetDP(_BudgetDP):
    """Budgets = team subset per timeslot (strict)."""

    algorithm = "hours-subsets"

    def __init__(self, instance, guard=STATE_GUARD):
        super().__init__(instance)
        self.horizon = self.idx.max_ex
        self.n_teams = len(instance.teams)
        if 2 ** (self.n_teams * self.horizon) > guard:
            raise StateSpaceTooLarge(
                f"2^(|T|*{self.horizon}) subset vectors exceed the guard {guard}")
        self.slot_relevant = {}
        for v in reversed(self.tree.preorder()):
            cs = self.tree.children.get(v, ())
            if not cs:
                d = min(instance.deadline(v), self.horizon)
                self.slot_relevant[v] = tuple(j < d for j in range(self.horizon))
            else:
                rel = [False] * self.horizon
                for c in cs:
                    rel = [r or s for r, s in zip(rel, self.slot_relevant[c])]
                self.slot_relevant[v] = tuple(rel)

    def root_budget(self):
        masks = [0] * self.horizon
        for i, t in enumerate(self.instance.teams):
            for j in range(t.start + 1, min(t.end, self.horizon) + 1):
                masks[j - 1] |= 1 << i
        return tuple(masks)

    def canon_budget(self, v, budget):
        return tuple(m if rel else 0
                     for m, rel in zip(budget, self.slot_relevant[v]))

    def leaf_options(self, x, budget):
        need = self.instance.length(x)
        deadline = min(self.instance.deadline(x), self.horizon)
        for start in range(deadline - need + 1):
            common = (1 << self.n_teams) - 1
            for j in range(start, start + need):
                common &= budget[j]
            for i in range(self.n_teams):
                if common >> i & 1:
                    share = tuple((1 << i) if start <= j < start + need else 0
                                  for j in range(self.horizon))
                    yield share, (i, start)

    def subtract(self, budget, share):
        return tuple(a & ~d for a, d in zip(budget, share))

    def child_shares(self, budget):
        subs = []
        for m in budget:
            opts = []
            s = 0
            while True:
                opts.append(s)
                if s == m:
                    break
                s = (s | ~m) + 1 & m
            subs.append(opts)
        return [tuple(reversed(s)) for s in
                itertools.product(*list(reversed(subs)))]

    def witness_schedule(self, saved, details) -> Schedule:
        assignment = {}
        for x in saved:
            team, start = details[x]
            for j in range(start + 1, start + self.instance.length(x) + 1):
                assignment[(team, j)] = x
        return Schedule(STRICT, assignment, canon(saved))


def solve_time_pd_team_vectors(instance: Instance, guard: int = STATE_GUARD) -> SolveOutcome:
    """Collaborative solver over per-timeslot team counts."""
    return _TeamCountDP(instance, guard).solve()


def solve_time_pd_hour_vectors(instance: Instance, guard: int = STATE_GUARD) -> SolveOutcome:
    """Collaborative solver over per-deadline-class hour budgets."""
    return _HourBudgetDP(instance, guard).solve()


def solve_s_time_pd_team_subsets(instance: Instance, guard: int = STATE_GUARD) -> SolveOutcome:
    """Strict solver over per-timeslot team subsets."""
    return _TeamSubsetDP(instance, guard).solve()
