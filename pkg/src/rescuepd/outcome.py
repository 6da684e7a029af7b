"""Uniform result type returned by every solver."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class SolveOutcome:
    """Decision plus witness and diagnostics.

    A "yes" always carries a saved set whose diversity meets the target and
    a schedule that passes verification; solvers assert this before
    returning.  ``value`` is the diversity of the witness (or the best value
    found, for exhaustive solvers).
    """

    decision: bool
    algorithm: str
    saved: tuple = None
    schedule: object = None
    value: int = None
    trials: int = None
    seed: int = None
    diagnostics: dict = field(default_factory=dict)
