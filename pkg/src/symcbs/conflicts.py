"""Conflict values, detection over a plan and MDD-based cardinality."""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import Sequence

from .mdd import MDD


class Cardinality(IntEnum):
    """Lower value = higher priority."""

    CARDINAL = 0
    SEMI = 1
    NON = 2


class SymClass(IntEnum):
    """Symmetry class of a conflict; lower value = higher priority."""

    TARGET = 0
    CORRIDOR = 1
    RECTANGLE = 2
    STANDARD = 3


@dataclass(frozen=True)
class Conflict:
    """Vertex conflict (u == v) or edge conflict where a1 moves u->v and a2 moves v->u at t."""

    kind: str
    a1: int
    a2: int
    u: int
    v: int
    t: int

    @property
    def is_vertex(self) -> bool:
        return self.kind == "vertex"

    @property
    def vertex(self) -> int:
        return self.v

    def swapped(self) -> "Conflict":
        if self.is_vertex:
            return Conflict("vertex", self.a2, self.a1, self.u, self.v, self.t)
        return Conflict("edge", self.a2, self.a1, self.v, self.u, self.t)


def vertex_conflict(a1: int, a2: int, v: int, t: int) -> Conflict:
    return Conflict("vertex", a1, a2, v, v, t)


def edge_conflict(a1: int, a2: int, u: int, v: int, t: int) -> Conflict:
    return Conflict("edge", a1, a2, u, v, t)


def detect_conflicts(paths: Sequence[Sequence[int]]) -> list[Conflict]:
    """All vertex and swap conflicts, agents parked at their last vertex.

    Order: timestep, then vertex conflicts before edge conflicts, then agent ids.
    """
    m = len(paths)
    if m < 2:
        return []
    horizon = max(len(p) for p in paths) - 1
    out: list[Conflict] = []
    lasts = [len(p) - 1 for p in paths]
    for t in range(1, horizon + 1):
        occupied: dict[int, list[int]] = {}
        for i in range(m):
            p = paths[i]
            v = p[t] if t <= lasts[i] else p[-1]
            occupied.setdefault(v, []).append(i)
        found: list[Conflict] = []
        for v, ags in occupied.items():
            if len(ags) > 1:
                for x in range(len(ags)):
                    for y in range(x + 1, len(ags)):
                        found.append(vertex_conflict(ags[x], ags[y], v, t))
        moves: dict[tuple[int, int], int] = {}
        for i in range(m):
            if t <= lasts[i]:
                p = paths[i]
                a, b = p[t - 1], p[t]
                if a != b:
                    moves[(a, b)] = i
        for (a, b), i in moves.items():
            j = moves.get((b, a))
            if j is not None and i < j:
                found.append(edge_conflict(i, j, a, b, t))
        found.sort(key=lambda c: (0 if c.is_vertex else 1, c.a1, c.a2))
        out.extend(found)
    return out


def side_is_cardinal(conflict: Conflict, mdd: MDD, first: bool) -> bool:
    t = conflict.t
    if conflict.is_vertex:
        return mdd.is_singleton(conflict.v, t)
    u, v = (conflict.u, conflict.v) if first else (conflict.v, conflict.u)
    return mdd.is_singleton(u, t - 1) and mdd.is_singleton(v, t)


def classify_conflict(conflict: Conflict, mdd1: MDD, mdd2: MDD) -> Cardinality:
    c1 = side_is_cardinal(conflict, mdd1, True)
    c2 = side_is_cardinal(conflict, mdd2, False)
    if c1 and c2:
        return Cardinality.CARDINAL
    if c1 or c2:
        return Cardinality.SEMI
    return Cardinality.NON
