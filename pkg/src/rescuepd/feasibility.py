"""Feasibility tests, schedule construction, and bit-exact verification.

A set of taxa has a collaborative schedule iff, for every distinct deadline,
the total rescue length of the chosen taxa due by that deadline fits within
the person-hours available by it (a Hall-type prefix condition).  The
constructive direction fills (team, slot) pairs sorted by slot with taxa
sorted by deadline.

Strict schedules assign each taxon to exactly one team as one consecutive
run.  Feasibility of a candidate ordering is decided by a greedy pass that
hands each team the longest prefix it can execute back-to-back; full strict
feasibility tries every ordering.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import DomainMismatch, InfeasibleSet, SetTooLarge
from .model import (COLLABORATIVE, STRICT, DerivedIndex, Instance, TeamWindow,
                    canon)


@dataclass(frozen=True)
class Schedule:
    """Assignment of (team index, timeslot) pairs to taxa.

    Pairs not present in ``assignment`` are idle.  ``saved`` is the set the
    schedule claims to save; verify_schedule checks the claim.
    """

    mode: str
    assignment: dict  # (team, slot) -> label
    saved: tuple = ()

    def hours_of(self, x: str) -> int:
        return sum(1 for t in self.assignment.values() if t == x)


@dataclass
class VerificationReport:
    """Per-taxon accounting of a schedule against its instance."""

    ok: bool
    mode: str
    hours: dict = field(default_factory=dict)       # label -> assigned hours
    required: dict = field(default_factory=dict)    # label -> rescue length
    post_deadline: list = field(default_factory=list)   # (label, team, slot)
    strictness: list = field(default_factory=list)      # offending labels
    underfilled: list = field(default_factory=list)     # labels short of hours


def collaborative_feasible(idx: DerivedIndex, taxa_set) -> bool:
    """Prefix condition: class-wise cumulative length within capacity."""
    members = set(taxa_set)
    need = [0] * idx.n_classes
    for x in members:
        need[idx.class_of[x]] += idx.instance.length(x)
    running = 0
    for k in range(idx.n_classes):
        running += need[k]
        if running > idx.hours[k]:
            return False
    return True


def build_collaborative_schedule(idx: DerivedIndex, taxa_set) -> Schedule:
    """Greedy witness for the prefix condition.

    (team, slot) pairs are taken in (slot, team) order and taxa in
    (class, label) order; each taxon gets the next rescue-length pairs.
    Deterministic, and always passes verify_schedule on feasible input.
    """
    members = canon(taxa_set)
    if not collaborative_feasible(idx, members):
        raise InfeasibleSet(f"no collaborative schedule saves {members}")
    inst = idx.instance
    pairs = sorted(inst.availability(), key=lambda ij: (ij[1], ij[0]))
    queue = sorted(members, key=lambda x: (idx.class_of[x], x))
    assignment = {}
    cursor = 0
    for x in queue:
        for _ in range(inst.length(x)):
            assignment[pairs[cursor]] = x
            cursor += 1
    return Schedule(COLLABORATIVE, assignment, members)


def single_team_feasible(team: TeamWindow, taxa_info: dict, taxa_set) -> bool:
    """One-team specialization of the prefix condition."""
    members = sorted(taxa_set, key=lambda x: taxa_info[x].extinction_time)
    running = 0
    for x in members:
        running += taxa_info[x].rescue_length
        if running > team.hours_until(taxa_info[x].extinction_time):
            return False
    return True


def strict_feasible_given_ordering(instance: Instance, ordering):
    """Greedily pack prefixes of the ordering onto teams t_1, t_2, ...

    Within a team, taxa run back-to-back from the window start, each run as
    early as possible; a taxon whose run would end after its deadline (or
    the window) starts the next team's prefix instead.  Returns a Schedule
    iff every taxon is placed, else None.
    """
    ordering = list(ordering)
    assignment = {}
    pos = 0
    for i, team in enumerate(instance.teams):
        cursor = team.start
        while pos < len(ordering):
            x = ordering[pos]
            end = cursor + instance.length(x)
            if end > min(team.end, instance.deadline(x)):
                break
            for j in range(cursor + 1, end + 1):
                assignment[(i, j)] = x
            cursor = end
            pos += 1
    if pos < len(ordering):
        return None
    return Schedule(STRICT, assignment, canon(ordering))


def strict_feasible(instance: Instance, taxa_set, guard: int = 10):
    """Try every ordering through the greedy; first success wins.

    Orderings are enumerated in lexicographic label order, so the returned
    schedule is deterministic.  None is a normal outcome.
    """
    members = canon(taxa_set)
    if guard is not None and len(members) > guard:
        raise SetTooLarge(f"{len(members)} taxa exceed the ordering guard {guard}")
    if not members:
        return Schedule(STRICT, {}, ())
    for ordering in itertools.permutations(members):
        sched = strict_feasible_given_ordering(instance, ordering)
        if sched is not None:
            return sched
    return None


def schedule_team_parts(instance: Instance, parts) -> Schedule:
    """Strict schedule from per-team taxa sets, earliest deadline first.

    Each team's part must satisfy the single-team prefix condition; runs are
    packed back-to-back from the window start.
    """
    assignment = {}
    saved = []
    for i, part in enumerate(parts):
        team = instance.teams[i]
        cursor = team.start
        for x in sorted(part, key=lambda x: (instance.deadline(x), x)):
            end = cursor + instance.length(x)
            if end > min(team.end, instance.deadline(x)):
                raise InfeasibleSet(f"team {i} cannot fit {x!r} by its deadline")
            for j in range(cursor + 1, end + 1):
                assignment[(i, j)] = x
            cursor = end
            saved.append(x)
    return Schedule(STRICT, assignment, canon(saved))


def strict_feasible_by_partition(instance: Instance, taxa_set):
    """Second oracle: enumerate assignments of taxa to teams directly.

    Used only in tests as a cross-check of the ordering-based search; a set
    is strictly feasible iff it splits into per-team single-team-feasible
    parts.
    """
    members = canon(taxa_set)
    if not members:
        return True
    n_teams = len(instance.teams)
    for choice in itertools.product(range(n_teams), repeat=len(members)):
        parts = [[] for _ in range(n_teams)]
        for x, i in zip(members, choice):
            parts[i].append(x)
        if all(single_team_feasible(instance.teams[i], instance.taxa, part)
               for i, part in enumerate(parts)):
            return True
    return False


def verify_schedule(instance: Instance, schedule: Schedule) -> VerificationReport:
    """Check validity, saving, and (strict mode) one-team consecutive runs."""
    pairs = set(instance.availability())
    for key in schedule.assignment:
        if key not in pairs:
            raise DomainMismatch(f"pair {key} is outside the availability set")
    hours: dict[str, int] = {}
    slots: dict[str, list] = {}
    report = VerificationReport(ok=True, mode=schedule.mode)
    for (i, j), x in sorted(schedule.assignment.items()):
        hours[x] = hours.get(x, 0) + 1
        slots.setdefault(x, []).append((i, j))
        if j > instance.deadline(x):
            report.post_deadline.append((x, i, j))
    touched = set(hours) | set(schedule.saved)
    for x in sorted(touched):
        report.hours[x] = hours.get(x, 0)
        report.required[x] = instance.length(x)
        if report.hours[x] < report.required[x]:
            report.underfilled.append(x)
    if schedule.mode == STRICT:
        for x, used in sorted(slots.items()):
            teams = {i for i, _ in used}
            times = sorted(j for _, j in used)
            consecutive = all(b == a + 1 for a, b in zip(times, times[1:]))
            if len(teams) > 1 or not consecutive:
                report.strictness.append(x)
    report.ok = not (report.post_deadline or report.strictness or report.underfilled)
    return report
