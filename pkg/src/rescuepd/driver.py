"""Solver registry, automatic algorithm selection, and the bench harness.

``auto`` picks the cheapest applicable algorithm in a fixed order: trivial
screen, star solver, loss-parameterized color coding (binary trees, small
loss), target-parameterized color coding (small target), the budget DPs and
the count-matrix solver (small state spaces), and finally brute force.  A
randomized "no" is never retried with another algorithm; the reported delta
stands.

The bench harness runs a sweep of generated instances through every
applicable solver, compares decisions against the brute-force oracle, and
writes one CSV row per (instance, algorithm).  Any disagreement is reported
with the smallest offending instance saved for triage.
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass

from . import budget_dp, structured
from .brute import brute_force
from .color_loss import solve_time_pd_by_loss
from .color_target import (solve_s_time_pd_by_target, solve_time_pd_by_target,
                           trial_count)
from .errors import RescuePDError
from .feasibility import verify_schedule
from .files import instance_to_dict
from .model import STRICT, Instance, build_derived_index, pd_of_subset
from .outcome import SolveOutcome

# applicability caps used by `auto` and the bench; callers can exceed them
# by invoking a solver directly with its own guard
AUTO_CAPS = {
    "target": 7,            # color-coding trials grow like e^target
    "strict_target": 5,
    "loss": 6,              # loss color coding: binary trees only
    "loss_work": 5 * 10**7,  # planned trials x table entries
    "team_vectors": 5000,   # budget vectors at the root
    "hour_vectors": 5000,
    "team_subsets": 4096,
    "count_matrices": 5000,
    "brute": 20,
    "strict_brute": 8,
}


def _loss_work(idx, delta):
    from .color_loss import loss_table_entry_count
    loss = idx.loss_budget
    if loss <= 0:
        return 0
    return trial_count(2 * loss, delta) * loss_table_entry_count(loss, idx.n_classes)


def applicable_algorithms(instance: Instance, delta: float = 1e-3,
                          caps: dict = None) -> list[str]:
    """Algorithms whose guards admit this instance, in auto preference order."""
    caps = {**AUTO_CAPS, **(caps or {})}
    idx = build_derived_index(instance)
    out = []
    strict = instance.mode == STRICT
    if not strict and instance.tree.is_star():
        out.append("star")
    if not strict and instance.tree.is_binary() and 0 <= idx.loss_budget <= caps["loss"] \
            and _loss_work(idx, delta) <= caps["loss_work"]:
        out.append("fpt-dbar")
    if instance.target <= (caps["strict_target"] if strict else caps["target"]):
        out.append("fpt-d")
    if not strict:
        space = 1
        for h in idx.hours:
            space *= h + 1
        counts = [0] * idx.max_ex
        for t in instance.teams:
            for j in range(t.start + 1, min(t.end, idx.max_ex) + 1):
                counts[j - 1] += 1
        vectors = 1
        for c in counts:
            vectors *= c + 1
        if vectors <= caps["team_vectors"]:
            out.append("hours-teams")
        if space <= caps["hour_vectors"]:
            out.append("hours-budget")
        buckets = {}
        for x in instance.taxa:
            key = (instance.length(x), instance.deadline(x))
            buckets[key] = buckets.get(key, 0) + 1
        matrices = 1
        for c in buckets.values():
            matrices *= c + 1
        if matrices <= caps["count_matrices"]:
            out.append("xp-counts")
    else:
        if 2 ** (len(instance.teams) * idx.max_ex) <= caps["team_subsets"]:
            out.append("hours-subsets")
    if len(instance.taxa) <= (caps["strict_brute"] if strict else caps["brute"]):
        out.append("brute")
    return out


def run_algorithm(instance: Instance, algorithm: str, delta: float = 1e-3,
                  seed: int = 0) -> SolveOutcome:
    """Dispatch one named algorithm."""
    strict = instance.mode == STRICT
    if algorithm == "brute":
        return brute_force(instance)
    if algorithm == "fpt-d":
        if strict:
            return solve_s_time_pd_by_target(instance, delta, seed)
        return solve_time_pd_by_target(instance, delta, seed)
    if algorithm == "fpt-dbar":
        if strict:
            raise RescuePDError("the loss-parameterized solver is collaborative only")
        return solve_time_pd_by_loss(instance, delta, seed)
    if algorithm == "hours-teams":
        return budget_dp.solve_time_pd_team_vectors(instance)
    if algorithm == "hours-budget":
        return budget_dp.solve_time_pd_hour_vectors(instance)
    if algorithm == "hours-subsets":
        return budget_dp.solve_s_time_pd_team_subsets(instance)
    if algorithm == "xp-counts":
        return structured.solve_time_pd_xp(instance)
    if algorithm == "star":
        return structured.solve_star(instance)
    raise RescuePDError(f"unknown algorithm {algorithm!r}")


def solve_auto(instance: Instance, delta: float = 1e-3, seed: int = 0):
    """First applicable algorithm in preference order; None if all guarded."""
    algorithms = applicable_algorithms(instance, delta)
    if not algorithms:
        return None
    out = run_algorithm(instance, algorithms[0], delta, seed)
    out.diagnostics["auto"] = algorithms[0]
    return out


@dataclass
class BenchRow:
    instance_id: int
    family: str
    n: int
    n_teams: int
    mode: str
    target: int
    pd_total: int
    algorithm: str
    decision: bool
    value: object
    trials: object
    wall_ms: float


def run_bench_instance(item, delta: float = 1e-3, seed: int = 0):
    """All applicable solvers on one instance, oracle first.

    Returns (rows, disagreement) where disagreement carries the oracle and
    offending algorithm decisions, or None.  Randomized false negatives
    (decision no on an oracle yes) are recorded but tolerated by the
    caller's statistics; a randomized yes on an oracle no is always a
    disagreement.
    """
    instance_id, family, instance = item
    idx = build_derived_index(instance)
    oracle = brute_force(instance)
    rows = []
    disagreement = None
    false_negative = 0
    randomized_runs = 0

    def record(algorithm, outcome, wall_ms):
        rows.append(BenchRow(instance_id, family, len(instance.taxa),
                             len(instance.teams), instance.mode,
                             instance.target, idx.pd_total, algorithm,
                             outcome.decision, outcome.value, outcome.trials,
                             round(wall_ms, 3)))

    if oracle.decision:
        report = verify_schedule(instance, oracle.schedule)
        if not report.ok or \
                pd_of_subset(instance.tree, oracle.saved) < instance.target:
            raise RescuePDError(
                f"brute returned an unverifiable witness on instance {instance_id}")
    record("brute", oracle, 0.0)
    for algorithm in applicable_algorithms(instance, delta):
        if algorithm == "brute":
            continue
        t0 = time.perf_counter()
        outcome = run_algorithm(instance, algorithm, delta, seed + instance_id)
        wall = (time.perf_counter() - t0) * 1e3
        if outcome.decision:
            report = verify_schedule(instance, outcome.schedule)
            if not report.ok or \
                    pd_of_subset(instance.tree, outcome.saved) < instance.target:
                raise RescuePDError(
                    f"{algorithm} returned an unverifiable witness on "
                    f"instance {instance_id}")
        record(algorithm, outcome, wall)
        randomized = algorithm in ("fpt-d", "fpt-dbar")
        if randomized:
            randomized_runs += 1
        if outcome.decision != oracle.decision:
            if randomized and oracle.decision and not outcome.decision:
                false_negative += 1
            else:
                disagreement = (algorithm, oracle.decision, outcome.decision)
    return rows, disagreement, false_negative, randomized_runs


def write_bench_csv(rows, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["instance_id", "family", "n", "teams", "mode",
                         "target", "pd_total", "algorithm", "decision",
                         "value", "trials", "wall_ms"])
        for row in rows:
            writer.writerow([row.instance_id, row.family, row.n, row.n_teams,
                             row.mode, row.target, row.pd_total, row.algorithm,
                             int(row.decision), row.value, row.trials,
                             row.wall_ms])


def run_bench(items, delta: float = 1e-3, seed: int = 0, jobs: int = 1):
    """Run a sweep; returns (rows, disagreements, false_neg, randomized_runs).

    Results are merged by instance index, so the outcome is independent of
    worker scheduling.
    """
    results = {}
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = {pool.submit(run_bench_instance, item, delta, seed): item[0]
                       for item in items}
            for future, instance_id in futures.items():
                results[instance_id] = future.result()
    else:
        for item in items:
            results[item[0]] = run_bench_instance(item, delta, seed)
    rows, disagreements = [], []
    false_neg = randomized = 0
    by_id = {item[0]: item for item in items}
    for instance_id in sorted(results):
        r, dis, fn, rand = results[instance_id]
        rows.extend(r)
        false_neg += fn
        randomized += rand
        if dis is not None:
            disagreements.append((instance_id, by_id[instance_id], dis))
    return rows, disagreements, false_neg, randomized


def smallest_disagreement(disagreements):
    """Triage pick: fewest taxa, then fewest availability pairs, then id."""
    def key(entry):
        instance_id, (_, _, instance), _ = entry
        return (len(instance.taxa), len(instance.availability()), instance_id)
    return min(disagreements, key=key)


def disagreement_report(entry) -> dict:
    instance_id, (_, family, instance), (algorithm, want, got) = entry
    return {
        "instance_id": instance_id,
        "family": family,
        "algorithm": algorithm,
        "oracle_decision": want,
        "algorithm_decision": got,
        "instance": instance_to_dict(instance),
    }
