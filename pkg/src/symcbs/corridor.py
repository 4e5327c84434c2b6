"""Corridor symmetry: two agents traversing a chain of degree-2 cells in opposite directions.

Covers plain corridors, pseudo-corridors (a single contested edge), corridors
with a start inside and corridors with one or two targets inside.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .conflicts import Cardinality, Conflict
from .constraints import (
    INF,
    Constraint,
    length_lower,
    length_upper,
    plan_violates,
    range_constraint,
)
from .context import NodeContext
from .grid import Instance


@dataclass(frozen=True)
class Corridor:
    """``chain`` runs from one endpoint to the other; everything between is degree 2."""

    chain: tuple[int, ...]

    @property
    def interior(self) -> tuple[int, ...]:
        return self.chain[1:-1]

    @property
    def endpoints(self) -> tuple[int, int]:
        return self.chain[0], self.chain[-1]

    @property
    def k(self) -> int:
        return len(self.chain) - 1

    @property
    def edges(self) -> list[tuple[int, int]]:
        return list(zip(self.chain, self.chain[1:]))

    def pos(self, v: int) -> int:
        return self.chain.index(v)

    def segment(self, u: int, v: int) -> list[tuple[int, int]]:
        """Chain edges between ``u`` and ``v``."""
        i, j = sorted((self.pos(u), self.pos(v)))
        return list(zip(self.chain[i:j], self.chain[i + 1 : j + 1]))

    def is_interior(self, v: int) -> bool:
        return v in self.chain[1:-1]


@dataclass(frozen=True)
class CorridorMode:
    generalized: bool = False
    pseudo: bool = False
    corridor_target: bool = False


@dataclass
class CorridorFinding:
    flavor: str  # basic, pseudo, corridor-target-1, corridor-target-2
    a1: int
    a2: int
    c1: tuple[Constraint, ...]
    c2: tuple[Constraint, ...]
    cardinality: Cardinality
    corridor: Corridor | None = None


def _walk(grid, first: int, prev: int, origin: int, stop) -> list[int] | None:
    """Follow degree-2 cells from ``first``; None if the walk loops back to ``origin``."""
    out = []
    cur = first
    while True:
        if cur == origin:
            return None
        out.append(cur)
        if grid.degree(cur) != 2 or stop(cur):
            return out
        a, b = grid.neighbors(cur)
        prev, cur = cur, (b if a == prev else a)


def find_corridor(conflict: Conflict, instance: Instance, generalized: bool = False) -> Corridor | None:
    """Chain of degree-2 cells through the conflict location.

    In basic mode the chain also stops at either agent's start or target,
    and a conflict sitting on one of those cells is not in a corridor.  In
    generalized mode an edge conflict between two non-corridor cells yields
    the one-edge chain used by pseudo-corridor screening.
    """
    grid = instance.map
    special: set[int] = set()
    if not generalized:
        for a in (conflict.a1, conflict.a2):
            special.add(instance.agents[a].start)
            special.add(instance.agents[a].target)

    def stop(v: int) -> bool:
        return v in special

    def ok(v: int) -> bool:
        return grid.degree(v) == 2 and v not in special

    if conflict.is_vertex:
        seed = conflict.v
        if not ok(seed):
            return None
    else:
        if ok(conflict.u):
            seed = conflict.u
        elif ok(conflict.v):
            seed = conflict.v
        elif generalized:
            return Corridor((conflict.u, conflict.v))
        else:
            return None
    n1, n2 = grid.neighbors(seed)
    left = _walk(grid, n1, seed, seed, stop)
    right = _walk(grid, n2, seed, seed, stop)
    if left is None or right is None:
        return None
    chain = tuple(reversed(left)) + (seed,) + tuple(right)
    if chain[0] == chain[-1]:
        return None
    return Corridor(chain)


def _at(path: Sequence[int], t: int) -> int:
    return path[t] if t < len(path) else path[-1]


def traversal(path: Sequence[int], corridor: Corridor, anchor: int) -> tuple[int, int] | None:
    """(entrance, exit) of the stay inside the corridor interior that covers ``anchor``.

    The entrance is the start when the stay begins at time 0 and the exit is
    the target when the stay lasts to the end of the path.
    """
    inside = set(corridor.interior)
    if _at(path, anchor) not in inside:
        return None
    last = len(path) - 1
    ts = min(anchor, last)
    while ts > 0 and path[ts - 1] in inside:
        ts -= 1
    te = min(anchor, last)
    while te < last and path[te + 1] in inside:
        te += 1
    entrance = path[0] if ts == 0 else path[ts - 1]
    exit_ = path[-1] if te == last else path[te + 1]
    return entrance, exit_


def _anchor(path: Sequence[int], corridor: Corridor, conflict: Conflict) -> int | None:
    for t in (conflict.t, conflict.t - 1):
        if t >= 0 and corridor.is_interior(_at(path, t)):
            return t
    return None


def _sign(v: int) -> int:
    return (v > 0) - (v < 0)


def must_cross(corridor: Corridor, b1: int, x1: int, b2: int, x2: int) -> bool:
    """Entrances and exits on opposite sides: the agents have to pass each other."""
    if b1 == b2 or x1 == x2:
        return False
    p = corridor.pos
    db = _sign(p(b1) - p(b2))
    dx = _sign(p(x1) - p(x2))
    return db != 0 and dx != 0 and db == -dx


def _label_ends(corridor: Corridor, b1: int, b2: int) -> tuple[int, int]:
    """(e1, e2): e1 is the end a1 heads for, e2 the end a2 heads for."""
    low, high = corridor.endpoints
    if corridor.pos(b1) < corridor.pos(b2):
        return high, low
    return low, high


def _range_or_none(agent: int, v: int, hi: float) -> Constraint | None:
    if hi < 0:
        return None
    return range_constraint(agent, v, 0, hi)


def basic_corridor_constraints(
    ctx: NodeContext, a1: int, a2: int, corridor: Corridor, e1: int, e2: int, b1=None, b2=None
) -> tuple[tuple[Constraint, ...], tuple[Constraint, ...]] | None:
    """Range constraints keeping each agent off its far endpoint until the other could have cleared it.

    ``b1``/``b2`` are the entrances; an agent starting inside may still back
    out, so only the stretch between its entrance and its far end is closed.
    """
    span = ctx.instance.map.distances(e1)[e2]
    t1 = ctx.arrival(a1, e1)
    t2 = ctx.arrival(a2, e2)
    t1x = ctx.arrival(a1, e1, excluded_edges=corridor.segment(e2 if b1 is None else b1, e1))
    t2x = ctx.arrival(a2, e2, excluded_edges=corridor.segment(e1 if b2 is None else b2, e2))
    hi1 = min(t1x - 1, t2 + span)
    hi2 = min(t2x - 1, t1 + span)
    if hi1 == INF or hi2 == INF:
        return None
    c1 = _range_or_none(a1, e1, hi1)
    c2 = _range_or_none(a2, e2, hi2)
    if c1 is None or c2 is None:
        return None
    return (c1,), (c2,)


def pseudo_corridor_reasoning(conflict: Conflict, ctx: NodeContext) -> CorridorFinding | None:
    """One contested edge that both agents must use at a fixed time in opposite directions."""
    a1, a2, t = conflict.a1, conflict.a2, conflict.t
    m1, m2 = ctx.mdd(a1), ctx.mdd(a2)
    if m1.empty or m2.empty:
        return None

    def single(m, tt: int) -> int | None:
        layer = m.layer_at(tt)
        return next(iter(layer)) if len(layer) == 1 else None

    if conflict.is_vertex:
        if t < 1:
            return None
        v = conflict.v
        p1 = [single(m1, t + d) for d in (-1, 0, 1)]
        p2 = [single(m2, t + d) for d in (-1, 0, 1)]
        if None in p1 or None in p2:
            return None
        if p1[1] != v or p2[1] != v or p1[0] != p2[2] or p1[2] != p2[0] or p1[0] == v or p1[2] == v:
            return None
        e1, e2 = v, p1[0]
    else:
        u, v = conflict.u, conflict.v
        if not (m1.is_singleton(u, t - 1) and m1.is_singleton(v, t) and m2.is_singleton(v, t - 1) and m2.is_singleton(u, t)):
            return None
        e1, e2 = v, u
    excl = [(e1, e2)]
    t1 = ctx.arrival(a1, e1)
    t2 = ctx.arrival(a2, e2)
    hi1 = min(ctx.arrival(a1, e1, excluded_edges=excl) - 1, t2 + 1)
    hi2 = min(ctx.arrival(a2, e2, excluded_edges=excl) - 1, t1 + 1)
    if hi1 == INF or hi2 == INF:
        return None
    c1 = _range_or_none(a1, e1, hi1)
    c2 = _range_or_none(a2, e2, hi2)
    if c1 is None or c2 is None:
        return None
    finding = CorridorFinding("pseudo", a1, a2, (c1,), (c2,), Cardinality.CARDINAL, Corridor((e2, e1)))
    return finding if _gate(finding, ctx) else None


def _gate(finding: CorridorFinding, ctx: NodeContext) -> bool:
    return plan_violates(finding.c1, ctx.paths, (finding.a1, finding.a2)) and plan_violates(
        finding.c2, ctx.paths, (finding.a1, finding.a2)
    )


def corridor_target_constraints(
    ctx: NodeContext, a1: int, a2: int, corridor: Corridor, e1: int, e2: int, both_inside: bool, b2=None
) -> tuple[tuple[Constraint, ...], tuple[Constraint, ...]] | None:
    """Split on whether a1 (target inside the corridor) finishes by the time a2 could have passed.

    ``e2`` is the end a2 leaves through (a1's side).
    """
    g1 = ctx.instance.agents[a1].target
    g2 = ctx.instance.agents[a2].target
    p = corridor.pos
    l = INF
    for es in corridor.endpoints:
        reach = max(ctx.arrival(a1, es) - 1, ctx.arrival(a2, es))
        l = min(l, reach + abs(p(es) - p(g1)))
    if l == INF:
        return None
    l = int(l)
    c1 = (length_lower(a1, l),)
    if both_inside:
        t2x = ctx.arrival(a2, g2, excluded_vertices=[g1])
        c2 = (length_upper(a1, l, g1), length_lower(a2, INF if t2x == INF else int(t2x) - 1))
    else:
        # with no way around, a2 is barred from e2 for good: it cannot get past a parked a1
        t2x = ctx.arrival(a2, e2, excluded_edges=corridor.segment(e1 if b2 is None else b2, e2))
        rc = _range_or_none(a2, e2, t2x - 1)
        c2 = (length_upper(a1, l, g1),) if rc is None else (length_upper(a1, l, g1), rc)
    return c1, c2


def corridor_reasoning(conflict: Conflict, ctx: NodeContext, mode: CorridorMode) -> CorridorFinding | None:
    """Corridor finding for ``conflict`` under ``mode``, or None ("not a corridor")."""
    corridor = find_corridor(conflict, ctx.instance, mode.generalized)
    if corridor is None or corridor.k == 1:
        if mode.pseudo:
            return pseudo_corridor_reasoning(conflict, ctx)
        return None
    a1, a2 = conflict.a1, conflict.a2
    p1, p2 = ctx.paths[a1], ctx.paths[a2]
    s1, s2 = _anchor(p1, corridor, conflict), _anchor(p2, corridor, conflict)
    if s1 is None or s2 is None:
        return None
    tr1, tr2 = traversal(p1, corridor, s1), traversal(p2, corridor, s2)
    if tr1 is None or tr2 is None:
        return None
    (b1, x1), (b2, x2) = tr1, tr2
    if not must_cross(corridor, b1, x1, b2, x2):
        return None
    card = ctx.cardinality(conflict)
    g1 = ctx.instance.agents[a1].target
    g2 = ctx.instance.agents[a2].target
    in1, in2 = corridor.is_interior(g1), corridor.is_interior(g2)
    if in1 or in2:
        if not mode.corridor_target:
            return None
        if in1 and in2:
            labelings = [(a1, a2, b1, b2), (a2, a1, b2, b1)]
            flavor = "corridor-target-2"
        elif in1:
            labelings = [(a1, a2, b1, b2)]
            flavor = "corridor-target-1"
        else:
            labelings = [(a2, a1, b2, b1)]
            flavor = "corridor-target-1"
        for f1, f2, fb1, fb2 in labelings:
            e1, e2 = _label_ends(corridor, fb1, fb2)
            sets = corridor_target_constraints(ctx, f1, f2, corridor, e1, e2, in1 and in2, fb2)
            if sets is None:
                continue
            finding = CorridorFinding(flavor, f1, f2, sets[0], sets[1], card, corridor)
            if _gate(finding, ctx):
                return finding
        return None
    e1, e2 = _label_ends(corridor, b1, b2)
    sets = basic_corridor_constraints(ctx, a1, a2, corridor, e1, e2, b1, b2)
    if sets is None:
        return None
    finding = CorridorFinding("basic", a1, a2, sets[0], sets[1], card, corridor)
    return finding if _gate(finding, ctx) else None
