"""Target symmetry: one agent parked at its target blocks another agent."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .conflicts import Cardinality, Conflict
from .constraints import Constraint, length_lower, length_upper


@dataclass(frozen=True)
class TargetFinding:
    finished: int
    other: int
    t: int
    target: int
    cardinality: Cardinality

    @property
    def c1(self) -> tuple[Constraint, ...]:
        return (length_lower(self.finished, self.t),)

    @property
    def c2(self) -> tuple[Constraint, ...]:
        return (length_upper(self.finished, self.t, self.target),)


def detect_target_conflict(
    conflict: Conflict,
    paths: Sequence[Sequence[int]],
    cardinality: Cardinality = Cardinality.SEMI,
) -> TargetFinding | None:
    if not conflict.is_vertex:
        return None
    t = conflict.t
    l1 = len(paths[conflict.a1]) - 1
    l2 = len(paths[conflict.a2]) - 1
    if t >= l1:
        finished, other = conflict.a1, conflict.a2
    elif t >= l2:
        finished, other = conflict.a2, conflict.a1
    else:
        return None
    target = paths[finished][-1]
    assert target == conflict.v, "a parked agent can only collide at its own target"
    # the parked side is always a singleton, so never non-cardinal
    card = cardinality if cardinality != Cardinality.NON else Cardinality.SEMI
    return TargetFinding(finished, other, t, target, card)


def target_split(finding: TargetFinding) -> tuple[tuple[Constraint, ...], tuple[Constraint, ...]]:
    return finding.c1, finding.c2
