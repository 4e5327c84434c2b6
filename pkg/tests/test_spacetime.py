import math
import random

from hypothesis import given, settings
from hypothesis import strategies as st

from symcbs.constraints import (
    INF,
    Kind,
    barrier_constraint,
    build_constraint_table,
    edge_constraint,
    length_lower,
    length_upper,
    own_violation,
    other_violation,
    range_constraint,
    vertex_constraint,
    violates,
)
from symcbs.fixtures import cell, corridor, random_grid, random_instance, target_row
from symcbs.grid import GridMap, Instance
from symcbs.spacetime import ConflictAvoidance, earliest_arrival, plan_shortest_path


def test_empty_table_permits_everything():
    tab = build_constraint_table([], 0, 5)
    assert (tab.lo, tab.hi) == (0, INF)
    assert not tab.is_constrained(5, 3)
    assert tab.goal_hold() == -1


def test_length_lower_window():
    tab = build_constraint_table([length_lower(1, 3)], 1, 0)
    assert tab.lo == 4 and tab.hi == INF


def test_range_prohibits_interval():
    v = 7
    tab = build_constraint_table([range_constraint(0, v, 0, 7)], 0, 99)
    assert all(tab.is_constrained(v, t) for t in range(8))
    assert not tab.is_constrained(v, 8)


def test_length_upper_blocks_other_agents():
    c = length_upper(1, 3, 42)
    own = build_constraint_table([c], 1, 42)
    other = build_constraint_table([c], 0, 9)
    assert own.hi == 3
    assert not other.is_constrained(42, 2)
    assert other.is_constrained(42, 3) and other.is_constrained(42, 100)


def test_contradictory_window_is_infeasible():
    tab = build_constraint_table([length_lower(0, 5), length_upper(0, 4, 1)], 0, 1)
    assert not tab.feasible_window


def test_violation_checks():
    p = [0, 1, 2, 3]
    assert own_violation(vertex_constraint(0, 2, 2), p)
    assert own_violation(vertex_constraint(0, 3, 9), p)  # parked
    assert own_violation(edge_constraint(0, 1, 2, 2), p)
    assert not own_violation(edge_constraint(0, 2, 1, 2), p)
    assert own_violation(barrier_constraint(0, [(5, 1), (3, 3)]), p)
    assert own_violation(range_constraint(0, 3, 5, INF), p)
    assert not own_violation(range_constraint(0, 2, 3, 9), p)
    assert own_violation(length_lower(0, 3), p) and not own_violation(length_lower(0, 2), p)
    assert own_violation(length_upper(0, 2, 3), p)
    assert other_violation(length_upper(1, 2, 3), p)
    assert not other_violation(length_upper(1, 4, 3), [0, 1, 2, 3, 4])
    assert violates(length_upper(1, 2, 9), 0, [9]) and not violates(vertex_constraint(1, 0, 0), 0, [0])


def test_open_grid_manhattan():
    g = GridMap.open(6, 6)
    inst = Instance.from_coords(g, [((0, 0), (4, 5))])
    p = plan_shortest_path(inst, 0, build_constraint_table([], 0, inst.agents[0].target))
    assert len(p) - 1 == 9


def test_target_left_child_waits():
    inst = target_row(3)
    g = inst.map
    tab = build_constraint_table([length_lower(1, 3)], 1, inst.agents[1].target)
    p = plan_shortest_path(inst, 1, tab)
    assert len(p) - 1 == 4
    assert p[0] == g.vertex(2, 0) and p[-1] == g.vertex(3, 0) and p[-2] != p[-1]


def test_target_right_child_prunes():
    inst = target_row(3)
    c = length_upper(1, 3, inst.agents[1].target)
    tab = build_constraint_table([c], 0, inst.agents[0].target)
    assert plan_shortest_path(inst, 0, tab) is None


def test_cannot_finish_while_target_later_forbidden():
    g = GridMap.open(3, 1)
    inst = Instance.from_coords(g, [((0, 0), (2, 0))])
    tab = build_constraint_table([vertex_constraint(0, 2, 5)], 0, 2)
    p = plan_shortest_path(inst, 0, tab)
    assert len(p) - 1 == 6 and p[5] != 2


def test_conflict_avoidance_breaks_ties():
    g = GridMap.open(3, 3)
    inst = Instance.from_coords(g, [((0, 0), (2, 2)), ((1, 0), (1, 2))])
    other = [g.vertex(1, 0), g.vertex(1, 1), g.vertex(1, 2)]
    tab = build_constraint_table([], 0, inst.agents[0].target)
    p = plan_shortest_path(inst, 0, tab, ConflictAvoidance([other]))
    assert len(p) - 1 == 4
    assert all(p[t] != other[min(t, 2)] for t in range(len(p)))


def test_corridor_arrivals():
    inst = corridor(3)
    g = inst.map
    d3, a3 = g.vertex(*cell("D3")), g.vertex(*cell("A3"))
    t1 = build_constraint_table([], 0, inst.agents[0].target)
    t2 = build_constraint_table([], 1, inst.agents[1].target)
    assert earliest_arrival(inst, 0, d3, t1) == 4
    assert earliest_arrival(inst, 1, a3, t2) == 4
    chain = [g.vertex(x, 2) for x in range(4)]
    excl = list(zip(chain, chain[1:]))
    assert earliest_arrival(inst, 0, d3, t1, excluded_edges=excl) == INF
    assert earliest_arrival(inst, 1, a3, t2, excluded_edges=excl) == INF
    assert earliest_arrival(inst, 0, inst.agents[0].start, t1) == 0


def _bfs_length(inst, agent, tab, horizon=40):
    """Independent breadth-first search over (vertex, timestep)."""
    g = inst.map
    s, goal = inst.agents[agent].start, inst.agents[agent].target
    if tab.is_constrained(s, 0):
        return None
    hold = tab.goal_hold()

    def done(v, t, prev):
        return v == goal and (t == 0 or prev != goal) and tab.lo <= t <= tab.hi and hold <= t

    frontier = {(s, None)}
    for t in range(horizon + 1):
        for v, prev in frontier:
            if done(v, t, prev):
                return t
        nxt = set()
        for v, _ in frontier:
            for w in g.neighbors(v) + (v,):
                if tab.is_constrained(w, t + 1) or (v, w, t + 1) in tab.edges:
                    continue
                nxt.add((w, v))
        frontier = nxt
    return None


def _random_constraints(rng, inst, agent, n):
    g = inst.map
    vs = list(g.vertices)
    out = []
    for _ in range(n):
        kind = rng.choice(["v", "v", "e", "r", "lo", "up"])
        t = rng.randint(1, 8)
        v = rng.choice(vs)
        if kind == "v":
            out.append(vertex_constraint(agent, v, t))
        elif kind == "e":
            nb = g.neighbors(v)
            if nb:
                out.append(edge_constraint(agent, v, rng.choice(nb), t))
        elif kind == "r":
            out.append(range_constraint(agent, v, rng.randint(0, 3), t + 3))
        elif kind == "lo":
            out.append(length_lower(agent, rng.randint(0, 10)))
        else:
            other = rng.choice([a.target for i, a in enumerate(inst.agents) if i != agent] or [v])
            out.append(length_upper(agent + 1, rng.randint(2, 12), other))
    return out


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10_000))
def test_planner_matches_bfs_and_respects_constraints(seed):
    rng = random.Random(seed)
    g = random_grid(rng.randint(3, 7), rng.randint(3, 7), 0.2, seed=seed)
    inst = random_instance(g, 2, seed=seed)
    cons = _random_constraints(rng, inst, 0, rng.randint(0, 6))
    tab = build_constraint_table([c for c in cons if c.agent == 0 or c.kind is Kind.LENGTH_UPPER], 0, inst.agents[0].target)
    p = plan_shortest_path(inst, 0, tab)
    ref = _bfs_length(inst, 0, tab)
    if p is None:
        assert ref is None
        return
    assert len(p) - 1 == ref
    for c in cons:
        if c.agent == 0 or c.kind is Kind.LENGTH_UPPER:
            assert not violates(c, 0, p), c
    for u, v in zip(p, p[1:]):
        assert u == v or v in g.neighbors(u)
    # earliest arrival never later than the planned visit
    for t, v in enumerate(p):
        assert earliest_arrival(inst, 0, v, tab) <= t


def test_unsatisfiable_is_none():
    g = GridMap.open(2, 1)
    inst = Instance.from_coords(g, [((0, 0), (1, 0))])
    tab = build_constraint_table([range_constraint(0, 1, 0, math.inf)], 0, 1)
    assert plan_shortest_path(inst, 0, tab) is None
