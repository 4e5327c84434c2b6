import random

from hypothesis import given, settings
from hypothesis import strategies as st

from symcbs.constraints import build_constraint_table, vertex_constraint
from symcbs.fixtures import random_grid, random_instance
from symcbs.grid import GridMap, Instance
from symcbs.mdd import blocks_all_paths, build_mdd, find_singletons
from symcbs.oracle import enumerate_paths
from symcbs.rectangle import STNode, barrier_nodes, rectangle_corners
from symcbs.spacetime import plan_shortest_path


def _mdd(inst, agent, cons=()):
    tab = build_constraint_table(cons, agent, inst.agents[agent].target)
    p = plan_shortest_path(inst, agent, tab)
    return build_mdd(inst, agent, tab, len(p) - 1), tab


def test_single_row_all_singletons():
    inst = Instance.from_coords(GridMap.open(5, 1), [((0, 0), (4, 0))])
    m, _ = _mdd(inst, 0)
    assert len(find_singletons(m)) == 5


def test_open_3x3_middle_layer():
    inst = Instance.from_coords(GridMap.open(3, 3), [((0, 0), (2, 2))])
    m, _ = _mdd(inst, 0)
    assert len(m.layers[2]) == 3
    assert len(list(m.paths())) == 6
    g = inst.map
    assert find_singletons(m) == [(g.vertex(0, 0), 0), (g.vertex(2, 2), 4)]


def test_dump_format():
    inst = Instance.from_coords(GridMap.open(3, 1), [((0, 0), (2, 0))])
    m, _ = _mdd(inst, 0)
    assert m.dump().splitlines() == ["0: 0", "1: 1", "2: 2"]


def test_infeasible_cost_gives_empty():
    inst = Instance.from_coords(GridMap.open(3, 1), [((0, 0), (2, 0))])
    tab = build_constraint_table([], 0, 2)
    assert build_mdd(inst, 0, tab, 1).empty


def test_blocks_all_paths():
    inst = Instance.from_coords(GridMap.open(3, 3), [((0, 0), (2, 2))])
    m, _ = _mdd(inst, 0)
    layer2 = [(v, 2) for v in m.layers[2]]
    assert blocks_all_paths(m, layer2)
    assert not blocks_all_paths(m, [])
    assert not blocks_all_paths(m, layer2[:2])


def test_cardinal_rectangle_barrier_is_a_cut():
    g = GridMap.open(5, 5)
    inst = Instance.from_coords(g, [((2, 1), (3, 4)), ((1, 2), (4, 4))])
    s1, g1, s2, g2 = STNode(2, 1, 0), STNode(3, 4, 4), STNode(1, 2, 0), STNode(4, 4, 5)
    rs, rg, r1, r2 = rectangle_corners(s1, g1, s2, g2)
    m1, _ = _mdd(inst, 0)
    m2, _ = _mdd(inst, 1)
    assert blocks_all_paths(m1, barrier_nodes(g, s1, r1, rg))
    assert blocks_all_paths(m2, barrier_nodes(g, s2, r2, rg))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 5000))
def test_mdd_paths_equal_enumerated_shortest_paths(seed):
    rng = random.Random(seed)
    g = random_grid(rng.randint(3, 6), rng.randint(3, 6), 0.15, seed=seed)
    inst = random_instance(g, 1, seed=seed)
    cons = [vertex_constraint(0, rng.choice(list(g.vertices)), rng.randint(1, 5)) for _ in range(rng.randint(0, 3))]
    tab = build_constraint_table(cons, 0, inst.agents[0].target)
    p = plan_shortest_path(inst, 0, tab)
    if p is None:
        return
    cost = len(p) - 1
    m = build_mdd(inst, 0, tab, cost)
    got = {tuple(x) for x in m.paths()}
    want = {tuple(x) for x in enumerate_paths(inst, 0, tab, cost) if len(x) - 1 == cost}
    assert got == want
    # no dead nodes
    for t, layer in enumerate(m.layers[:-1]):
        assert all(m.succ[t].get(v) for v in layer)
