import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symcbs.grid import (
    AgentSpec,
    GridMap,
    Instance,
    MapFormatError,
    load_instance,
    parse_map,
    parse_scen,
    serialize_map,
    serialize_scen,
    true_distance,
    vertex_degree,
)

SMALL = """type octile
height 3
width 4
map
....
.@@.
....
"""


def test_parse_small_map():
    g = parse_map(SMALL)
    assert (g.width, g.height) == (4, 3)
    assert g.num_vertices == 10
    assert not g.is_free(1, 1) and g.is_free(0, 1)


def test_movingai_symbols():
    g = parse_map("type octile\nheight 1\nwidth 6\nmap\n.G@OTS\n")
    assert [g.is_free(x, 0) for x in range(6)] == [True, True, False, False, False, False]
    assert not g.is_free(5, 0)


def test_water_is_blocked():
    g = parse_map("type octile\nheight 1\nwidth 2\nmap\nW.\n")
    assert not g.is_free(0, 0)


@pytest.mark.parametrize(
    "text, line",
    [
        ("type octile\nheight 2\nwidth 3\nmap\n...\n..\n", 6),
        ("type octile\nheight 1\nwidth 3\nmap\n.x.\n", 5),
        ("type octile\nwidth 3\nheight 1\nmap\n...\n", 2),
        ("type octile\nheight 2\nwidth 2\nmap\n..\n", 6),
    ],
)
def test_parse_errors_name_line(text, line):
    with pytest.raises(MapFormatError, match=f"line {line}"):
        parse_map(text)


def test_round_trip_is_exact():
    assert serialize_map(parse_map(SMALL)) == SMALL


@settings(max_examples=60, deadline=None)
@given(
    st.integers(1, 8).flatmap(
        lambda w: st.integers(1, 8).flatmap(lambda h: st.tuples(st.just(w), st.just(h), st.lists(st.booleans(), min_size=w * h, max_size=w * h)))
    )
)
def test_round_trip_random(spec):
    w, h, blocked = spec
    g = GridMap(w, h, blocked)
    assert parse_map(serialize_map(g)) == g


def test_open_grid_distance_is_manhattan():
    g = GridMap.open(5, 6)
    d = true_distance(g, g.vertex(0, 0))
    assert d[g.vertex(3, 4)] == 7


def test_distance_around_wall_and_unreachable():
    g = GridMap.from_rows(["...", "@@.", "...", "@@@", "..."])
    d = true_distance(g, g.vertex(0, 0))
    assert d[g.vertex(0, 2)] == 6
    assert d[g.vertex(0, 4)] == math.inf


def test_distance_from_blocked_source_fails():
    g = GridMap.from_rows([".@"])
    with pytest.raises(ValueError):
        true_distance(g, g.vertex(1, 0))


def test_degree():
    g = GridMap.from_rows(["...", ".@.", "..."])
    assert vertex_degree(g, g.vertex(0, 0)) == 2
    assert vertex_degree(g, g.vertex(1, 0)) == 2
    assert GridMap.open(3, 3).degree(4) == 4


SCEN = "version 1\n0\tm.map\t4\t3\t0\t0\t3\t2\t5\n0\tm.map\t4\t3\t3\t0\t0\t2\t5\n"


def test_parse_scen_and_load_instance():
    g = parse_map(SMALL)
    specs = parse_scen(SCEN, g)
    assert specs == [AgentSpec(g.vertex(0, 0), g.vertex(3, 2)), AgentSpec(g.vertex(3, 0), g.vertex(0, 2))]
    inst = load_instance(SMALL, SCEN, 1, offset=1)
    assert inst.num_agents == 1 and inst.agents[0] == specs[1]


def test_scen_errors():
    g = parse_map(SMALL)
    with pytest.raises(MapFormatError, match="version"):
        parse_scen("version 3\n", g)
    with pytest.raises(MapFormatError, match="blocked"):
        parse_scen("version 1\n0\tm\t4\t3\t1\t1\t0\t0\t1\n", g)
    with pytest.raises(MapFormatError, match="out of bounds"):
        parse_scen("version 1\n0\tm\t4\t3\t9\t1\t0\t0\t1\n", g)
    with pytest.raises(MapFormatError, match="need"):
        load_instance(SMALL, SCEN, 3)


def test_scen_round_trip():
    inst = load_instance(SMALL, SCEN, 2)
    again = parse_scen(serialize_scen(inst), inst.map)
    assert again == inst.agents


def test_instance_validation():
    g = GridMap.from_rows(["..@."])
    with pytest.raises(ValueError, match="distinct starts"):
        Instance(g, [AgentSpec(0, 1), AgentSpec(0, 3)])
    with pytest.raises(ValueError, match="unreachable"):
        Instance(g, [AgentSpec(0, 3)])
    with pytest.raises(ValueError, match="blocked"):
        Instance(g, [AgentSpec(2, 0)])
