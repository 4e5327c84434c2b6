"""Choosing how to split on a conflict: corridor, target, rectangle or the plain split."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

from .conflicts import Cardinality, Conflict, SymClass
from .constraints import Constraint, edge_constraint, vertex_constraint
from .context import NodeContext
from .corridor import CorridorMode, corridor_reasoning
from .rectangle import detect_generalized_rectangle, detect_rectangle_entire, detect_rectangle_segments
from .target import detect_target_conflict

RECTANGLE_KINDS = (None, "R", "RM", "GR")


@dataclass(frozen=True)
class ReasoningConfig:
    rectangle: str | None = None
    target: bool = False
    corridor: CorridorMode | None = None

    def __post_init__(self) -> None:
        if self.rectangle not in RECTANGLE_KINDS:
            raise ValueError(f"unknown rectangle technique {self.rectangle!r}")

    @property
    def any(self) -> bool:
        return self.rectangle is not None or self.target or self.corridor is not None


@dataclass
class ReasoningOutcome:
    conflict: Conflict
    symclass: SymClass
    c1: tuple[Constraint, ...]
    c2: tuple[Constraint, ...]
    cardinality: Cardinality
    detail: Any = None

    @property
    def constraint_sets(self) -> tuple[tuple[Constraint, ...], tuple[Constraint, ...]]:
        return self.c1, self.c2


def standard_split(conflict: Conflict) -> tuple[tuple[Constraint, ...], tuple[Constraint, ...]]:
    if conflict.is_vertex:
        return (vertex_constraint(conflict.a1, conflict.v, conflict.t),), (vertex_constraint(conflict.a2, conflict.v, conflict.t),)
    return (edge_constraint(conflict.a1, conflict.u, conflict.v, conflict.t),), (
        edge_constraint(conflict.a2, conflict.v, conflict.u, conflict.t),
    )


def reason_symmetry(conflict: Conflict, ctx: NodeContext, config: ReasoningConfig) -> ReasoningOutcome:
    """First applicable technique in the order corridor, target, rectangle; else the plain split."""
    base = ctx.cardinality(conflict)
    if config.corridor is not None:
        f = corridor_reasoning(conflict, ctx, config.corridor)
        if f is not None:
            return ReasoningOutcome(conflict, SymClass.CORRIDOR, f.c1, f.c2, f.cardinality, f)
    l1, l2 = ctx.length(conflict.a1), ctx.length(conflict.a2)
    if config.target and conflict.is_vertex and conflict.t >= min(l1, l2):
        f = detect_target_conflict(conflict, ctx.paths, base)
        if f is not None:
            return ReasoningOutcome(conflict, SymClass.TARGET, f.c1, f.c2, f.cardinality, f)
    if (
        config.rectangle is not None
        and conflict.is_vertex
        and base != Cardinality.CARDINAL
        and conflict.t < min(l1, l2)
    ):
        grid = ctx.instance.map
        if config.rectangle == "R":
            f = detect_rectangle_entire(conflict, grid, ctx.paths)
        elif config.rectangle == "RM":
            f = detect_rectangle_segments(conflict, grid, ctx.paths, ctx.mdd(conflict.a1), ctx.mdd(conflict.a2))
        else:
            f = detect_generalized_rectangle(conflict, grid, ctx.paths, ctx.mdd(conflict.a1), ctx.mdd(conflict.a2))
        if f is not None:
            return ReasoningOutcome(conflict, SymClass.RECTANGLE, f.c1, f.c2, f.cardinality, f)
    c1, c2 = standard_split(conflict)
    return ReasoningOutcome(conflict, SymClass.STANDARD, c1, c2, base)


def selection_key(outcome: ReasoningOutcome, index: int) -> tuple[int, int, int]:
    return int(outcome.cardinality), int(outcome.symclass), index


def select_conflict(outcomes: Sequence[ReasoningOutcome]) -> ReasoningOutcome:
    """Cardinal before semi before non; then target, corridor, rectangle, plain; then detection order."""
    if not outcomes:
        raise ValueError("no conflicts to choose from")
    best = min(range(len(outcomes)), key=lambda i: selection_key(outcomes[i], i))
    return outcomes[best]
