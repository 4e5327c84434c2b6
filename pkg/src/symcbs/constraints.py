"""Constraint values, per-agent constraint tables and violation checks."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

INF = math.inf


class Kind(str, Enum):
    VERTEX = "vertex"
    EDGE = "edge"
    BARRIER = "barrier"
    RANGE = "range"
    LENGTH_LOWER = "length-lower"
    LENGTH_UPPER = "length-upper"


@dataclass(frozen=True)
class Constraint:
    """A single constraint binding ``agent``.

    Field use per kind:
      vertex        vertex, t
      edge          edge=(u, v), t  (forbids moving u->v between t-1 and t)
      barrier       nodes = ((v, t), ...)
      range         vertex, t (first step), t_max (may be INF)
      length-lower  bound: path length must exceed it
      length-upper  bound: path length must not exceed it; every other
                    agent is barred from ``vertex`` (the agent's target)
                    at all timesteps >= bound
    """

    kind: Kind
    agent: int
    vertex: int = -1
    edge: tuple[int, int] | None = None
    t: int = 0
    t_max: float = 0
    nodes: tuple[tuple[int, int], ...] = ()
    bound: int = 0

    def __repr__(self) -> str:
        k = self.kind
        if k is Kind.VERTEX:
            body = f"v={self.vertex}, t={self.t}"
        elif k is Kind.EDGE:
            body = f"e={self.edge}, t={self.t}"
        elif k is Kind.BARRIER:
            body = f"nodes={list(self.nodes)}"
        elif k is Kind.RANGE:
            body = f"v={self.vertex}, [{self.t}, {self.t_max}]"
        elif k is Kind.LENGTH_LOWER:
            body = f"l > {self.bound}"
        else:
            body = f"l <= {self.bound} (target {self.vertex})"
        return f"<{k.value} a{self.agent} {body}>"


def vertex_constraint(agent: int, v: int, t: int) -> Constraint:
    return Constraint(Kind.VERTEX, agent, vertex=v, t=t)


def edge_constraint(agent: int, u: int, v: int, t: int) -> Constraint:
    return Constraint(Kind.EDGE, agent, edge=(u, v), t=t)


def barrier_constraint(agent: int, nodes: Iterable[tuple[int, int]]) -> Constraint:
    return Constraint(Kind.BARRIER, agent, nodes=tuple(sorted(set(nodes), key=lambda n: (n[1], n[0]))))


def range_constraint(agent: int, v: int, t_min: int, t_max: float) -> Constraint:
    if t_min < 0 or t_max < t_min:
        raise ValueError("range constraint needs 0 <= t_min <= t_max")
    return Constraint(Kind.RANGE, agent, vertex=v, t=t_min, t_max=t_max)


def length_lower(agent: int, bound: int) -> Constraint:
    return Constraint(Kind.LENGTH_LOWER, agent, bound=bound)


def length_upper(agent: int, bound: int, target: int) -> Constraint:
    return Constraint(Kind.LENGTH_UPPER, agent, vertex=target, bound=bound)


def binds(c: Constraint, agent: int) -> bool:
    """True if ``c`` restricts ``agent`` directly or through a length-upper prohibition."""
    return c.agent == agent or c.kind is Kind.LENGTH_UPPER


class ConstraintTable:
    """Indexed prohibitions for one agent.

    ``lo``/``hi`` is the admissible path-length window.  ``goal_hold`` is the
    latest timestep at which the agent's own target is prohibited (-1 if
    never); a path may only finish after it.
    """

    __slots__ = ("vertex_times", "edges", "ranges", "blocked_after", "lo", "hi", "max_t", "target", "_has_ranges")

    def __init__(self, target: int):
        self.target = target
        self.vertex_times: set[tuple[int, int]] = set()
        self.edges: set[tuple[int, int, int]] = set()
        self.ranges: dict[int, list[tuple[int, float]]] = {}
        self.blocked_after: dict[int, int] = {}
        self.lo = 0
        self.hi: float = INF
        self.max_t = 0
        self._has_ranges = False

    @property
    def feasible_window(self) -> bool:
        return self.lo != INF and self.lo <= self.hi

    def is_constrained(self, v: int, t: int) -> bool:
        if (v, t) in self.vertex_times:
            return True
        if self._has_ranges:
            r = self.ranges.get(v)
            if r:
                for a, b in r:
                    if a <= t <= b:
                        return True
        b = self.blocked_after.get(v)
        return b is not None and t >= b

    def is_edge_constrained(self, u: int, v: int, t: int) -> bool:
        return (u, v, t) in self.edges

    def goal_hold(self) -> float:
        """Latest prohibited timestep at the target (INF if prohibited forever)."""
        g = self.target
        if g in self.blocked_after:
            return INF
        last: float = -1
        for v, t in self.vertex_times:
            if v == g and t > last:
                last = t
        for a, b in self.ranges.get(g, ()):
            if b > last:
                last = b
        return last

    def add(self, c: Constraint, agent: int) -> None:
        k = c.kind
        if k is Kind.LENGTH_UPPER:
            if c.agent == agent:
                self.hi = min(self.hi, c.bound)
                self.max_t = max(self.max_t, c.bound)
            else:
                prev = self.blocked_after.get(c.vertex)
                self.blocked_after[c.vertex] = c.bound if prev is None else min(prev, c.bound)
                self.max_t = max(self.max_t, c.bound)
            return
        if c.agent != agent:
            return
        if k is Kind.VERTEX:
            self.vertex_times.add((c.vertex, c.t))
            self.max_t = max(self.max_t, c.t)
        elif k is Kind.EDGE:
            u, v = c.edge
            self.edges.add((u, v, c.t))
            self.max_t = max(self.max_t, c.t)
        elif k is Kind.BARRIER:
            for v, t in c.nodes:
                self.vertex_times.add((v, t))
                self.max_t = max(self.max_t, t)
        elif k is Kind.RANGE:
            self.ranges.setdefault(c.vertex, []).append((c.t, c.t_max))
            self._has_ranges = True
            self.max_t = max(self.max_t, c.t if c.t_max == INF else int(c.t_max))
        elif k is Kind.LENGTH_LOWER:
            if c.bound == INF:
                self.lo = INF
            else:
                self.lo = max(self.lo, c.bound + 1)
                self.max_t = max(self.max_t, c.bound + 1)


def build_constraint_table(constraints: Iterable[Constraint], agent: int, target: int) -> ConstraintTable:
    table = ConstraintTable(target)
    for c in constraints:
        table.add(c, agent)
    return table


# violation checks ---------------------------------------------------------

def _at(path: Sequence[int], t: int) -> int:
    return path[t] if t < len(path) else path[-1]


def path_length(path: Sequence[int]) -> int:
    return len(path) - 1


def own_violation(c: Constraint, path: Sequence[int]) -> bool:
    """Does ``path`` (of ``c.agent``) violate ``c``?  Agents park at the end of the path."""
    k = c.kind
    last = len(path) - 1
    if k is Kind.VERTEX:
        return _at(path, c.t) == c.vertex
    if k is Kind.EDGE:
        u, v = c.edge
        return c.t <= last and path[c.t - 1] == u and path[c.t] == v
    if k is Kind.BARRIER:
        return any(_at(path, t) == v for v, t in c.nodes)
    if k is Kind.RANGE:
        hi = last if c.t_max == INF else min(int(c.t_max), last)
        for t in range(c.t, hi + 1):
            if path[t] == c.vertex:
                return True
        # parked at the vertex past the end of the path
        return path[-1] == c.vertex and c.t_max >= max(last, c.t)
    if k is Kind.LENGTH_LOWER:
        return last <= c.bound
    return last > c.bound


def other_violation(c: Constraint, path: Sequence[int]) -> bool:
    """Does a path of some agent other than ``c.agent`` break the prohibition of a length-upper constraint?"""
    if c.kind is not Kind.LENGTH_UPPER:
        return False
    last = len(path) - 1
    if path[-1] == c.vertex:
        return True
    return any(path[t] == c.vertex for t in range(c.bound, last + 1))


def violates(c: Constraint, agent: int, path: Sequence[int]) -> bool:
    if c.agent == agent:
        return own_violation(c, path)
    return other_violation(c, path)


def plan_violates(constraints: Iterable[Constraint], paths: Sequence[Sequence[int]], agents: Iterable[int] | None = None) -> bool:
    """True if any listed agent's path violates any constraint."""
    ids = range(len(paths)) if agents is None else agents
    cs = list(constraints)
    for i in ids:
        for c in cs:
            if binds(c, i) and violates(c, i, paths[i]):
                return True
    return False


def agents_to_replan(new: Sequence[Constraint], paths: Sequence[Sequence[int]]) -> list[int]:
    out = []
    for i, p in enumerate(paths):
        if any(binds(c, i) and violates(c, i, p) for c in new):
            out.append(i)
    return out
