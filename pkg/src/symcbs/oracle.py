"""Brute-force ground truth: joint-state A* and an exhaustive check that two constraint sets are mutually disjunctive."""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .constraints import INF, Constraint, ConstraintTable, Kind, binds, build_constraint_table
from .grid import Instance
from .spacetime import plan_shortest_path


# joint-state search -------------------------------------------------------

def joint_state_astar(instance: Instance, horizon: int | None = None, max_states: int = 2_000_000):
    """Optimal sum of costs over the joint state space.

    A state is every agent's vertex plus whether it has finished; a finished
    agent sits on its target for good and stops accruing cost.  Returns
    ``(cost, paths)`` or ``(INF, None)`` when no plan fits in the horizon.
    """
    grid = instance.map
    m = instance.num_agents
    goals = instance.targets()
    dists = [grid.distances(g) for g in goals]
    if any(d[s] == INF for d, s in zip(dists, instance.starts())):
        return INF, None
    if horizon is None:
        horizon = m * (grid.num_vertices + m)
    full = (1 << m) - 1

    def h(pos: tuple[int, ...], done: int) -> int:
        return sum(int(dists[i][pos[i]]) for i in range(m) if not done >> i & 1)

    def finish_variants(pos: tuple[int, ...], done: int) -> Iterator[int]:
        can = [i for i in range(m) if not done >> i & 1 and pos[i] == goals[i]]
        for r in range(len(can) + 1):
            for sub in itertools.combinations(can, r):
                d = done
                for i in sub:
                    d |= 1 << i
                yield d

    start = tuple(instance.starts())
    counter = itertools.count()
    open_heap = []
    g_best: dict[tuple, int] = {}
    parent: dict[tuple, tuple | None] = {}
    for d in finish_variants(start, 0):
        s = (start, d)
        g_best[s] = 0
        parent[s] = None
        heapq.heappush(open_heap, (h(start, d), 0, next(counter), s, 0))
    closed: set[tuple] = set()
    while open_heap:
        f, _, _, s, t = heapq.heappop(open_heap)
        if s in closed:
            continue
        g = g_best[s]
        closed.add(s)
        if len(closed) > max_states:
            raise RuntimeError("joint-state search exceeded its state budget")
        pos, done = s
        if done == full:
            return g, _joint_paths(s, parent, m)
        if t >= horizon:
            continue
        active = [i for i in range(m) if not done >> i & 1]
        step = len(active)
        for nxt in _joint_moves(grid, pos, done, active, goals):
            for nd in finish_variants(nxt, done):
                ns = (nxt, nd)
                if ns in closed:
                    continue
                ng = g + step
                if ng < g_best.get(ns, INF):
                    g_best[ns] = ng
                    parent[ns] = s
                    heapq.heappush(open_heap, (ng + h(nxt, nd), -ng, next(counter), ns, t + 1))
    return INF, None


def _joint_moves(grid, pos, done, active, goals) -> Iterator[tuple[int, ...]]:
    m = len(pos)
    parked = {pos[i] for i in range(m) if done >> i & 1}
    options = [grid.neighbors(pos[i]) + (pos[i],) for i in active]
    nxt = list(pos)

    def rec(k: int, used: set[int]) -> Iterator[tuple[int, ...]]:
        if k == len(active):
            yield tuple(nxt)
            return
        i = active[k]
        for w in options[k]:
            if w in used or w in parked:
                continue
            # swap with an agent already assigned
            if any(nxt[active[j]] == pos[i] and pos[active[j]] == w and w != pos[i] for j in range(k)):
                continue
            nxt[i] = w
            used.add(w)
            yield from rec(k + 1, used)
            used.discard(w)
        nxt[i] = pos[i]

    yield from rec(0, set())


def _joint_paths(s, parent, m: int) -> list[list[int]]:
    states = []
    while s is not None:
        states.append(s)
        s = parent[s]
    states.reverse()
    out = []
    for i in range(m):
        # an agent's path ends at the first state in which it is finished
        end = next(k for k, (_, done) in enumerate(states) if done >> i & 1)
        out.append([pos[i] for pos, _ in states[: end + 1]])
    return out


# single-agent enumeration --------------------------------------------------

def enumerate_paths(instance: Instance, agent: int, table: ConstraintTable, max_len: int, limit: int = 200_000) -> list[list[int]]:
    """Every path of length <= max_len satisfying ``table`` (normalised: never ends with a wait at the target)."""
    grid = instance.map
    start = instance.agents[agent].start
    goal = instance.agents[agent].target
    dist = grid.distances(goal)
    hold = table.goal_hold()
    out: list[list[int]] = []
    if table.is_constrained(start, 0):
        return out

    def rec(path: list[int]) -> None:
        if len(out) > limit:
            raise RuntimeError("path enumeration exceeded its budget")
        t = len(path) - 1
        v = path[-1]
        if v == goal and (t == 0 or path[-2] != goal) and table.lo <= t <= table.hi and hold <= t:
            out.append(list(path))
        if t >= max_len:
            return
        for w in grid.neighbors(v) + (v,):
            if t + 1 + dist[w] > max_len:
                continue
            if table.is_constrained(w, t + 1) or (v, w, t + 1) in table.edges:
                continue
            path.append(w)
            rec(path)
            path.pop()

    if dist[start] <= max_len:
        rec([start])
    return out


# mutual disjunctiveness ------------------------------------------------------

@dataclass
class Verdict:
    status: str  # disjunctive, counterexample, inconclusive
    counterexample: tuple[list[int], list[int]] | None = None
    states: int = 0

    @property
    def ok(self) -> bool:
        return self.status == "disjunctive"


def _step_hits(cs: Sequence[Constraint], agent: int, v: int, w: int, t: int) -> bool:
    """Does occupying w at t (arriving from v) break some constraint in cs?"""
    for c in cs:
        k = c.kind
        if c.agent == agent:
            if k is Kind.VERTEX:
                if c.vertex == w and c.t == t:
                    return True
            elif k is Kind.EDGE:
                if t > 0 and c.t == t and c.edge == (v, w):
                    return True
            elif k is Kind.BARRIER:
                if (w, t) in c.nodes:
                    return True
            elif k is Kind.RANGE:
                if c.vertex == w and c.t <= t <= c.t_max:
                    return True
        elif k is Kind.LENGTH_UPPER and c.vertex == w and t >= c.bound:
            return True
    return False


def _commit_hits(cs: Sequence[Constraint], agent: int, goal: int, l: int) -> bool:
    """Does finishing at ``goal`` at time l (and parking there) break some constraint in cs?"""
    for c in cs:
        k = c.kind
        if c.agent == agent:
            if k is Kind.VERTEX:
                if c.vertex == goal and c.t > l:
                    return True
            elif k is Kind.BARRIER:
                if any(v == goal and t > l for v, t in c.nodes):
                    return True
            elif k is Kind.RANGE:
                if c.vertex == goal and c.t_max > l:
                    return True
            elif k is Kind.LENGTH_LOWER:
                if l <= c.bound:
                    return True
            elif k is Kind.LENGTH_UPPER:
                if l > c.bound:
                    return True
        elif k is Kind.LENGTH_UPPER and c.vertex == goal:
            return True
    return False


def verify_mutually_disjunctive(
    instance: Instance,
    a1: int,
    a2: int,
    c1: Iterable[Constraint],
    c2: Iterable[Constraint],
    node_constraints: Iterable[Constraint] = (),
    slack: int = 3,
    budget: int = 2_000_000,
) -> Verdict:
    """Search for two mutually conflict-free paths that both break ``c1`` and break ``c2``.

    Paths must respect ``node_constraints`` and be at most ``slack`` longer
    than the agent's shortest path under them.  The search runs over the
    product of both agents' space-time graphs, tracking which sets have been
    broken so far, so no path list is ever materialised.
    """
    c1 = tuple(c1)
    c2 = tuple(c2)
    node_constraints = tuple(node_constraints)
    agents = (a1, a2)
    goals = tuple(instance.agents[a].target for a in agents)
    starts = tuple(instance.agents[a].start for a in agents)
    tables = [build_constraint_table([c for c in node_constraints if binds(c, a)], a, instance.agents[a].target) for a in agents]
    caps = []
    for a, tab in zip(agents, tables):
        p = plan_shortest_path(instance, a, tab)
        if p is None:
            return Verdict("disjunctive")
        caps.append(len(p) - 1 + slack)
    holds = [tab.goal_hold() for tab in tables]
    grid = instance.map
    dists = [grid.distances(g) for g in goals]
    sets = (c1, c2)

    def bits_for_step(i: int, v: int, w: int, t: int) -> int:
        b = 0
        for s in range(2):
            if _step_hits(sets[s], agents[i], v, w, t):
                b |= 1 << s
        return b

    def bits_for_commit(i: int, l: int) -> int:
        b = 0
        for s in range(2):
            if _commit_hits(sets[s], agents[i], goals[i], l):
                b |= 1 << s
        return b

    def can_commit(i: int, l: int) -> bool:
        tab = tables[i]
        return tab.lo <= l <= tab.hi and holds[i] <= l

    # per-agent options at time t+1 from (v, finished, prev_was_goal)
    def options(i: int, v: int, fin: bool, t: int) -> list[tuple[int, bool, bool, int]]:
        if fin:
            return [(v, True, True, 0)]
        out = []
        nt = t + 1
        for w in grid.neighbors(v) + (v,):
            if nt + dists[i][w] > caps[i]:
                continue
            if tables[i].is_constrained(w, nt) or (v, w, nt) in tables[i].edges:
                continue
            b = bits_for_step(i, v, w, nt)
            out.append((w, False, w == goals[i] and v == goals[i], b))
            if w == goals[i] and v != goals[i] and can_commit(i, nt):
                out.append((w, True, False, b | bits_for_commit(i, nt)))
        return out

    # initial states
    init = []
    for fin1 in (False, True):
        for fin2 in (False, True):
            ok = True
            b = bits_for_step(0, starts[0], starts[0], 0) | bits_for_step(1, starts[1], starts[1], 0)
            for i, fin in enumerate((fin1, fin2)):
                if tables[i].is_constrained(starts[i], 0):
                    ok = False
                if fin:
                    if starts[i] != goals[i] or not can_commit(i, 0):
                        ok = False
                    else:
                        b |= bits_for_commit(i, 0)
            if ok:
                init.append((0, starts[0], fin1, starts[1], fin2, b))
    parent: dict[tuple, tuple | None] = {s: None for s in init}
    layer = list(init)
    n_states = len(layer)
    horizon = max(caps)
    t = 0
    while layer:
        for s in layer:
            _, v1, f1, v2, f2, b = s
            if f1 and f2 and b == 3:
                return Verdict("counterexample", _product_paths(s, parent), n_states)
        if t >= horizon:
            break
        nxt_layer = []
        for s in layer:
            _, v1, f1, v2, f2, b = s
            if f1 and f2:
                continue
            for w1, nf1, _, b1 in options(0, v1, f1, t):
                for w2, nf2, _, b2 in options(1, v2, f2, t):
                    if w1 == w2:
                        continue
                    if w1 == v2 and w2 == v1 and w1 != v1:
                        continue
                    ns = (t + 1, w1, nf1, w2, nf2, b | b1 | b2)
                    if ns in parent:
                        continue
                    parent[ns] = s
                    nxt_layer.append(ns)
                    n_states += 1
                    if n_states > budget:
                        return Verdict("inconclusive", None, n_states)
        layer = nxt_layer
        t += 1
    return Verdict("disjunctive", None, n_states)


def _product_paths(s, parent) -> tuple[list[int], list[int]]:
    seq = []
    while s is not None:
        seq.append(s)
        s = parent[s]
    seq.reverse()
    end1 = next(k for k, st in enumerate(seq) if st[2])
    end2 = next(k for k, st in enumerate(seq) if st[4])
    return [st[1] for st in seq[: end1 + 1]], [st[3] for st in seq[: end2 + 1]]
