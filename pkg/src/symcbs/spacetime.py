"""Space-time A* for a single agent plus earliest-arrival queries."""

from __future__ import annotations

import heapq
import math
from typing import Iterable, Sequence

from .constraints import ConstraintTable
from .grid import Instance

INF = math.inf


class ConflictAvoidance:
    """Counts how often a move collides with a fixed set of other paths."""

    def __init__(self, paths: Iterable[Sequence[int]] = ()):
        self.cells: dict[tuple[int, int], int] = {}
        self.moves: dict[tuple[int, int, int], int] = {}
        self.parked: dict[int, int] = {}
        for p in paths:
            self.add(p)

    def add(self, path: Sequence[int]) -> None:
        cells = self.cells
        last = len(path) - 1
        for t, v in enumerate(path[:-1]):
            cells[(v, t)] = cells.get((v, t), 0) + 1
        for t in range(1, last + 1):
            if path[t] != path[t - 1]:
                key = (path[t - 1], path[t], t)
                self.moves[key] = self.moves.get(key, 0) + 1
        g = path[-1]
        prev = self.parked.get(g)
        self.parked[g] = last if prev is None else min(prev, last)

    def count(self, u: int, v: int, t: int) -> int:
        n = self.cells.get((v, t), 0)
        p = self.parked.get(v)
        if p is not None and t >= p:
            n += 1
        if u != v:
            n += self.moves.get((v, u, t), 0)
        return n

    def __bool__(self) -> bool:
        return bool(self.cells) or bool(self.parked)


def search_horizon(instance: Instance, table: ConstraintTable) -> int:
    return instance.map.num_vertices + table.max_t + 1


def plan_shortest_path(
    instance: Instance,
    agent: int,
    table: ConstraintTable,
    other_paths: Iterable[Sequence[int]] | ConflictAvoidance = (),
) -> list[int] | None:
    """Minimum-length path under ``table``; ties prefer fewer conflicts, then FIFO."""
    if not table.feasible_window:
        return None
    grid = instance.map
    spec = instance.agents[agent]
    start, goal = spec.start, spec.target
    dist = grid.distances(goal)
    if dist[start] == INF:
        return None
    hold = table.goal_hold()
    if hold == INF:
        return None
    lo, hi = table.lo, table.hi
    earliest_finish = max(lo, int(hold) + 1)
    if table.is_constrained(start, 0):
        return None
    horizon = search_horizon(instance, table)
    if hi < horizon:
        horizon = int(hi)
    cat = other_paths if isinstance(other_paths, ConflictAvoidance) else ConflictAvoidance(other_paths)
    use_cat = bool(cat)
    cat_cells, cat_moves, cat_parked = cat.cells, cat.moves, cat.parked
    nbrs = grid._neighbors
    vt = table.vertex_times
    ranges = table.ranges if table._has_ranges else None
    blocked_after = table.blocked_after
    edges = table.edges
    heappush, heappop = heapq.heappush, heapq.heappop

    # state: (v, t, waited_at_goal); heap entries carry f, conflicts, FIFO counter
    counter = 0
    h0 = max(dist[start], earliest_finish)
    if h0 > horizon:
        return None
    open_heap = [(h0, 0, counter, start, 0, False)]
    parents: dict[tuple[int, int, bool], tuple[int, int, bool] | None] = {(start, 0, False): None}
    best_conf: dict[tuple[int, int, bool], int] = {(start, 0, False): 0}
    closed: set[tuple[int, int, bool]] = set()
    while open_heap:
        f, conf, _, v, t, waited = heappop(open_heap)
        state = (v, t, waited)
        if state in closed:
            continue
        closed.add(state)
        if v == goal and not waited and t >= earliest_finish and t <= hi:
            path = []
            s: tuple[int, int, bool] | None = state
            while s is not None:
                path.append(s[0])
                s = parents[s]
            path.reverse()
            return path
        nt = t + 1
        if nt > horizon:
            continue
        rem = earliest_finish - nt
        for w in nbrs[v] + (v,):
            d = dist[w]
            hw = d if d >= rem else rem
            if nt + hw > horizon:
                continue
            if (w, nt) in vt:
                continue
            if blocked_after:
                ba = blocked_after.get(w)
                if ba is not None and nt >= ba:
                    continue
            if ranges is not None:
                rs = ranges.get(w)
                if rs and any(a <= nt <= b for a, b in rs):
                    continue
            if edges and (v, w, nt) in edges:
                continue
            nwaited = w == goal and v == goal
            nstate = (w, nt, nwaited)
            if nstate in closed:
                continue
            nconf = conf
            if use_cat:
                nconf += cat_cells.get((w, nt), 0)
                pk = cat_parked.get(w)
                if pk is not None and nt >= pk:
                    nconf += 1
                if w != v:
                    nconf += cat_moves.get((w, v, nt), 0)
            old = best_conf.get(nstate)
            if old is not None and old <= nconf:
                continue
            best_conf[nstate] = nconf
            parents[nstate] = state
            counter += 1
            heappush(open_heap, (nt + hw, nconf, counter, w, nt, nwaited))
    return None


def earliest_arrival(
    instance: Instance,
    agent: int,
    x: int,
    table: ConstraintTable,
    excluded_edges: Iterable[tuple[int, int]] | None = None,
    excluded_vertices: Iterable[int] | None = None,
) -> float:
    """Earliest timestep at which ``agent`` can occupy ``x`` under ``table``.

    Excluded edges are forbidden in both directions; excluded vertices may
    not be entered at all (the start itself is exempt).
    """
    grid = instance.map
    start = instance.agents[agent].start
    if table.is_constrained(start, 0):
        return INF
    if x == start:
        return 0
    banned_e: set[tuple[int, int]] = set()
    for u, v in excluded_edges or ():
        banned_e.add((u, v))
        banned_e.add((v, u))
    banned_v = set(excluded_vertices or ())
    banned_v.discard(start)
    if x in banned_v:
        return INF
    horizon = search_horizon(instance, table)
    nbrs = grid._neighbors
    is_constrained = table.is_constrained
    edges = table.edges
    layer = {start}
    t = 0
    while t < horizon:
        nt = t + 1
        nxt: set[int] = set()
        for v in layer:
            for w in nbrs[v] + (v,):
                if w in nxt or w in banned_v:
                    continue
                if banned_e and (v, w) in banned_e:
                    continue
                if is_constrained(w, nt) or (edges and (v, w, nt) in edges):
                    continue
                nxt.add(w)
        if not nxt:
            return INF
        if x in nxt:
            return nt
        if nt > table.max_t and nxt == layer:
            return INF
        layer = nxt
        t = nt
    return INF
