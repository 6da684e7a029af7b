"""Instance and schedule files: JSON with an embedded Newick tree.

Timeslots are 1-based in files, matching the in-memory convention: a team
{"start": s, "end": e} works slots s+1 through e.  Serialization is
canonical (sorted keys, fixed indentation), so round-trips are bit-exact.
"""

from __future__ import annotations

import json

from .errors import ParseError
from .feasibility import Schedule
from .model import Instance, TaxonInfo, TeamWindow
from .newick import parse_newick, to_newick

SCHEMA_VERSION = 1


def instance_to_dict(instance: Instance) -> dict:
    return {
        "v": SCHEMA_VERSION,
        "tree": to_newick(instance.tree),
        "taxa": {x: {"ell": info.rescue_length, "ex": info.extinction_time}
                 for x, info in sorted(instance.taxa.items())},
        "teams": [{"start": t.start, "end": t.end} for t in instance.teams],
        "D": instance.target,
        "mode": instance.mode,
    }


def instance_from_dict(data: dict) -> Instance:
    if data.get("v") != SCHEMA_VERSION:
        raise ParseError(f"unsupported schema version {data.get('v')!r}")
    for field in ("tree", "taxa", "teams", "D", "mode"):
        if field not in data:
            raise ParseError(f"instance file is missing {field!r}")
    tree = parse_newick(data["tree"])
    taxa = {}
    for x, entry in data["taxa"].items():
        try:
            taxa[x] = TaxonInfo(int(entry["ell"]), int(entry["ex"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad taxon entry for {x!r}: {exc}") from None
    if set(taxa) != set(tree.taxa):
        diff = sorted(set(taxa) ^ set(tree.taxa))
        raise ParseError(f"taxa keys and Newick leaves differ on {diff}")
    teams = tuple(TeamWindow(int(t["start"]), int(t["end"])) for t in data["teams"])
    return Instance(tree, taxa, teams, int(data["D"]), data["mode"])


def schedule_to_dict(schedule: Schedule, pd_value: int) -> dict:
    return {
        "mode": schedule.mode,
        "assignments": [{"team": i, "slot": j, "taxon": x}
                        for (i, j), x in sorted(schedule.assignment.items())],
        "saved": list(schedule.saved),
        "pd": pd_value,
    }


def schedule_from_dict(data: dict) -> tuple[Schedule, int]:
    assignment = {(entry["team"], entry["slot"]): entry["taxon"]
                  for entry in data["assignments"]}
    return (Schedule(data["mode"], assignment, tuple(data["saved"])),
            int(data["pd"]))


def dumps(data: dict) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def save_instance(instance: Instance, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(instance_to_dict(instance)))


def load_instance(path) -> Instance:
    with open(path) as fh:
        return instance_from_dict(json.load(fh))


def save_schedule(schedule: Schedule, pd_value: int, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(schedule_to_dict(schedule, pd_value)))


def load_schedule(path) -> tuple[Schedule, int]:
    with open(path) as fh:
        return schedule_from_dict(json.load(fh))
