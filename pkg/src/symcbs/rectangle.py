"""Rectangle symmetry: two agents crossing the same Manhattan-optimal area.

Three detectors are provided: from entire paths (R), from MDD singleton
segments (RM) and from the generalized conflicting area of both MDDs (GR).
All of them return a :class:`RectangleFinding` holding one barrier per agent.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .conflicts import Cardinality, Conflict
from .constraints import Constraint, barrier_constraint, own_violation
from .grid import GridMap
from .mdd import MDD, blocks_all_paths, find_singletons

# cap on singleton segments tried per agent by the segment detector
MAX_SEGMENTS = 40


@dataclass(frozen=True)
class STNode:
    x: int
    y: int
    t: int


@dataclass
class RectangleFinding:
    a1: int
    a2: int
    barrier1: Constraint
    barrier2: Constraint
    cardinality: Cardinality
    rs: tuple[int, int] | None = None
    rg: tuple[int, int] | None = None
    r1: tuple[int, int] | None = None
    r2: tuple[int, int] | None = None
    area: int = 0

    @property
    def c1(self) -> tuple[Constraint, ...]:
        return (self.barrier1,)

    @property
    def c2(self) -> tuple[Constraint, ...]:
        return (self.barrier2,)


def _sign(v: int) -> int:
    return (v > 0) - (v < 0)


def manhattan(a: STNode, b: STNode) -> int:
    return abs(a.x - b.x) + abs(a.y - b.y)


def rectangle_equations_hold(s1: STNode, g1: STNode, s2: STNode, g2: STNode, segments: bool) -> bool:
    """Manhattan-optimal segments moving in compatible directions (plus the side check for segments)."""
    if not (manhattan(s1, g1) == g1.t - s1.t > 0):
        return False
    if not (manhattan(s2, g2) == g2.t - s2.t > 0):
        return False
    if (s1.x - g1.x) * (s2.x - g2.x) < 0:
        return False
    if (s1.y - g1.y) * (s2.y - g2.y) < 0:
        return False
    if segments:
        if (s1.x, s1.y, s1.t) == (s2.x, s2.y, s2.t) or (s1.x, s1.y) == (s2.x, s2.y):
            return False
        if (s1.x - s2.x) * (s1.y - s2.y) * (s1.x - g1.x) * (s1.y - g1.y) > 0:
            return False
    return True


def _axis_corners(s1: int, g1: int, s2: int, g2: int) -> tuple[int, int]:
    if s1 == g1:
        return s1, g1
    if s1 < g1:
        return max(s1, s2), min(g1, g2)
    return min(s1, s2), max(g1, g2)


def rectangle_corners(
    s1: STNode, g1: STNode, s2: STNode, g2: STNode, segments: bool = False
) -> tuple[STNode, STNode, STNode, STNode] | None:
    """Corners (R_s, R_g, R_1, R_2) of the rectangle; R_i lies opposite S_i.

    Each start must sit on one of the two side lines through R_s, the two on
    different lines, so each agent enters through its own side.  None otherwise.
    """
    rsx, rgx = _axis_corners(s1.x, g1.x, s2.x, g2.x)
    rsy, rgy = _axis_corners(s1.y, g1.y, s2.y, g2.y)
    row1, col1 = s1.y == rsy, s1.x == rsx
    row2, col2 = s2.y == rsy, s2.x == rsx
    if row1 and col2 and not (col1 and row2):
        first = True
    elif col1 and row2 and not (row1 and col2):
        first = False
    elif row1 and col2:
        first = (s1.x - s2.x) * (s2.x - rgx) >= 0
    else:
        return None
    if first:
        r1 = (rgx, rsy)
        r2 = (rsx, rgy)
    else:
        r1 = (rsx, rgy)
        r2 = (rgx, rsy)

    def node(x: int, y: int) -> STNode:
        return STNode(x, y, s1.t + abs(s1.x - x) + abs(s1.y - y))

    # both agents must reach R_s at the same timestep
    if s1.t + abs(s1.x - rsx) + abs(s1.y - rsy) != s2.t + abs(s2.x - rsx) + abs(s2.y - rsy):
        return None
    return node(rsx, rsy), node(rgx, rgy), node(*r1), node(*r2)


def classify_rectangle(s1: STNode, g1: STNode, s2: STNode, g2: STNode, r1: STNode, r2: STNode, rg: STNode) -> Cardinality:
    x1 = r1.x - rg.x == s1.x - g1.x
    y1 = r1.y - rg.y == s1.y - g1.y
    x2 = r2.x - rg.x == s2.x - g2.x
    y2 = r2.y - rg.y == s2.y - g2.y
    if (x1 and y2) or (y1 and x2):
        return Cardinality.CARDINAL
    if x1 or y1 or x2 or y2:
        return Cardinality.SEMI
    return Cardinality.NON


def border_cells(a: STNode, b: STNode) -> list[tuple[int, int]]:
    """Cells on the straight border from a to b, inclusive."""
    if a.x != b.x and a.y != b.y:
        raise ValueError("border corners must share a row or column")
    dx, dy = _sign(b.x - a.x), _sign(b.y - a.y)
    cells = [(a.x, a.y)]
    x, y = a.x, a.y
    while (x, y) != (b.x, b.y):
        x += dx
        y += dy
        cells.append((x, y))
    return cells


def barrier_nodes(grid: GridMap, start: STNode, ri: STNode, rg: STNode, mdd: MDD | None = None) -> list[tuple[int, int]]:
    """(vertex, t) nodes along R_i -> R_g timed by the agent's own start node."""
    out = []
    for x, y in border_cells(ri, rg):
        if not grid.is_free(x, y):
            continue
        v = grid.vertex(x, y)
        t = start.t + abs(start.x - x) + abs(start.y - y)
        if mdd is not None and (v, t) not in mdd:
            continue
        out.append((v, t))
    return out


def _st(grid: GridMap, v: int, t: int) -> STNode:
    x, y = grid.coords(v)
    return STNode(x, y, t)


def _path_hits(path: Sequence[int], nodes: Sequence[tuple[int, int]]) -> bool:
    last = len(path) - 1
    return any((path[t] if t <= last else path[-1]) == v for v, t in nodes)


def _finding(
    grid: GridMap,
    conflict: Conflict,
    s1: STNode,
    g1: STNode,
    s2: STNode,
    g2: STNode,
    segments: bool,
    mdd1: MDD | None,
    mdd2: MDD | None,
) -> RectangleFinding | None:
    corners = rectangle_corners(s1, g1, s2, g2, segments)
    if corners is None:
        return None
    rs, rg, r1, r2 = corners
    b1 = barrier_nodes(grid, s1, r1, rg, mdd1)
    b2 = barrier_nodes(grid, s2, r2, rg, mdd2)
    if not b1 or not b2:
        return None
    card = classify_rectangle(s1, g1, s2, g2, r1, r2, rg)
    area = abs(r1.x - r2.x) * abs(r1.y - r2.y)
    return RectangleFinding(
        conflict.a1,
        conflict.a2,
        barrier_constraint(conflict.a1, b1),
        barrier_constraint(conflict.a2, b2),
        card,
        (rs.x, rs.y),
        (rg.x, rg.y),
        (r1.x, r1.y),
        (r2.x, r2.y),
        area,
    )


def blocks_current_paths(finding: RectangleFinding, paths: Sequence[Sequence[int]]) -> bool:
    return own_violation(finding.barrier1, paths[finding.a1]) and own_violation(finding.barrier2, paths[finding.a2])


def detect_rectangle_entire(conflict: Conflict, grid: GridMap, paths: Sequence[Sequence[int]]) -> RectangleFinding | None:
    """Rectangle from whole paths: S_i = (s_i, 0), G_i = (g_i, length)."""
    if not conflict.is_vertex:
        return None
    p1, p2 = paths[conflict.a1], paths[conflict.a2]
    s1, g1 = _st(grid, p1[0], 0), _st(grid, p1[-1], len(p1) - 1)
    s2, g2 = _st(grid, p2[0], 0), _st(grid, p2[-1], len(p2) - 1)
    if not rectangle_equations_hold(s1, g1, s2, g2, segments=False):
        return None
    finding = _finding(grid, conflict, s1, g1, s2, g2, False, None, None)
    if finding is None or not blocks_current_paths(finding, paths):
        return None
    return finding


def _segments(grid: GridMap, mdd: MDD, t: int) -> list[tuple[STNode, STNode]]:
    singles = find_singletons(mdd)
    starts = [_st(grid, v, ts) for v, ts in singles if ts <= t]
    goals = [_st(grid, v, ts) for v, ts in singles if ts >= t]
    pairs = []
    for s in starts:
        for g in goals:
            if manhattan(s, g) == g.t - s.t > 0:
                pairs.append((s, g))
    pairs.sort(key=lambda p: (-(p[1].t - p[0].t), p[0].t))
    return pairs[:MAX_SEGMENTS]


def detect_rectangle_segments(
    conflict: Conflict, grid: GridMap, paths: Sequence[Sequence[int]], mdd1: MDD, mdd2: MDD
) -> RectangleFinding | None:
    """Rectangle from singleton-bounded path segments, barriers restricted to MDD nodes."""
    if not conflict.is_vertex:
        return None
    t = conflict.t
    best: RectangleFinding | None = None
    segs1 = _segments(grid, mdd1, t)
    segs2 = _segments(grid, mdd2, t)
    for s1, g1 in segs1:
        for s2, g2 in segs2:
            if not rectangle_equations_hold(s1, g1, s2, g2, segments=True):
                continue
            f = _finding(grid, conflict, s1, g1, s2, g2, True, mdd1, mdd2)
            if f is None:
                continue
            if best is None or f.cardinality < best.cardinality or (f.cardinality == best.cardinality and f.area > best.area):
                best = f
    if best is None or not blocks_current_paths(best, paths):
        return None
    return best


# generalized rectangles ---------------------------------------------------

@dataclass
class ConflictingArea:
    """Cells visited at one common timestep by every shortest path of both agents."""

    times: dict[int, int]
    entrances1: set[tuple[int, int]] = field(default_factory=set)
    entrances2: set[tuple[int, int]] = field(default_factory=set)


@dataclass
class BorderScan:
    rs: int
    rg: int
    r1: int
    r2: int
    barrier1: list[int]
    barrier2: list[int]


def find_conflicting_area(conflict: Conflict, mdd1: MDD, mdd2: MDD, grid: GridMap) -> ConflictingArea | None:
    if not conflict.is_vertex:
        return None
    m1, m2 = mdd1.occurrences(), mdd2.occurrences()
    v, t = conflict.v, conflict.t
    if m1.get(v) != [t] or m2.get(v) != [t]:
        return None
    times = {v: t}
    queue = deque([v])
    while queue:
        u = queue.popleft()
        tu = times[u]
        for w in grid.neighbors(u):
            if w in times:
                continue
            o1, o2 = m1.get(w), m2.get(w)
            if o1 is None or o2 is None or len(o1) != 1 or o1 != o2:
                continue
            tw = o1[0]
            if tw == tu + 1:
                ok = mdd1.has_edge(u, w, tw) and mdd2.has_edge(u, w, tw)
            elif tw == tu - 1:
                ok = mdd1.has_edge(w, u, tu) and mdd2.has_edge(w, u, tu)
            else:
                ok = False
            if ok:
                times[w] = tw
                queue.append(w)
    if len(times) <= 1:
        return None
    area = ConflictingArea(times)
    for mdd, ent in ((mdd1, area.entrances1), (mdd2, area.entrances2)):
        pred = mdd.pred
        for w, tw in times.items():
            for u in pred[tw].get(w, ()):
                if u not in times:
                    ent.add((u, w))
    return area


_DIRS = {"N": (0, -1), "E": (1, 0), "S": (0, 1), "W": (-1, 0)}
_CW = {"E": "S", "S": "W", "W": "N", "N": "E"}
_CCW = {v: k for k, v in _CW.items()}


def _boundary_cycles(cells: set[tuple[int, int]]) -> list[list[tuple[tuple[int, int], tuple[int, int], float]]]:
    """Closed boundary walks of a cell set.

    Each element is a list of (inside cell, outside cell, signed area part).
    Diagonal pinch points are resolved so that the walk hugs the current cell.
    """
    edges: dict[tuple[int, int], list[tuple[tuple[int, int], tuple[int, int], str, tuple[int, int], tuple[int, int]]]] = {}
    for x, y in cells:
        for side, (dx, dy) in _DIRS.items():
            out = (x + dx, y + dy)
            if out in cells:
                continue
            if side == "N":
                a, b, mv = (x, y), (x + 1, y), "E"
            elif side == "E":
                a, b, mv = (x + 1, y), (x + 1, y + 1), "S"
            elif side == "S":
                a, b, mv = (x + 1, y + 1), (x, y + 1), "W"
            else:
                a, b, mv = (x, y + 1), (x, y), "N"
            edges.setdefault(a, []).append((a, b, mv, (x, y), out))
    used: set[tuple] = set()
    cycles = []
    for a in sorted(edges):
        for e in sorted(edges[a]):
            if e in used:
                continue
            cyc = []
            cur = e
            while cur not in used:
                used.add(cur)
                (ax, ay), (bx, by), mv, cell, out = cur
                cyc.append((cell, out, (ax * by - bx * ay) / 2.0))
                options = [o for o in edges.get(cur[1], ()) if o not in used]
                nxt = None
                for pref in (_CW[mv], mv, _CCW[mv]):
                    for o in options:
                        if o[2] == pref:
                            nxt = o
                            break
                    if nxt is not None:
                        break
                if nxt is None:
                    break
                cur = nxt
            cycles.append(cyc)
    return cycles


def _cyclic_range(i: int, j: int, n: int) -> list[int]:
    out = [i]
    while i != j:
        i = (i + 1) % n
        out.append(i)
    return out


def scan_border_and_holes(area: ConflictingArea, grid: GridMap) -> BorderScan | None:
    coords = {grid.coords(v): v for v in area.times}
    cycles = _boundary_cycles(set(coords))
    if not cycles:
        return None
    outer_idx = max(range(len(cycles)), key=lambda i: abs(sum(c[2] for c in cycles[i])))

    def label(cell: tuple[int, int], out: tuple[int, int]) -> int:
        if not grid.is_free(*out):
            return 0
        w = coords[cell]
        u = grid.vertex(*out)
        lab = 0
        if (u, w) in area.entrances1:
            lab |= 1
        if (u, w) in area.entrances2:
            lab |= 2
        return lab

    for i, cyc in enumerate(cycles):
        if i == outer_idx:
            continue
        seen = 0
        for cell, out, _ in cyc:
            seen |= label(cell, out)
        if seen == 3:
            return None

    outer = cycles[outer_idx]
    n = len(outer)
    labels = [label(cell, out) for cell, out, _ in outer]
    if 3 in labels:
        return None
    marked = [i for i in range(n) if labels[i]]
    if not marked or {labels[i] for i in marked} != {1, 2}:
        return None
    # contiguous runs in cyclic order over the marked segments
    runs: list[tuple[int, int, int]] = []
    for pos, i in enumerate(marked):
        if not runs or labels[i] != runs[-1][0]:
            runs.append((labels[i], i, i))
        else:
            runs[-1] = (runs[-1][0], runs[-1][1], i)
    if len(runs) > 2 and runs[0][0] == runs[-1][0]:
        lab, _, end = runs[0]
        runs[0] = (lab, runs[-1][1], end)
        runs.pop()
    if len(runs) != 2:
        return None
    run = {lab: (s, e) for lab, s, e in runs}
    s1, e1 = run[1]
    s2, e2 = run[2]
    gap_after1 = _cyclic_range(e1, s2, n)
    gap_after2 = _cyclic_range(e2, s1, n)

    border = {coords[cell] for cell, _, _ in outer}
    tmin = min(area.times[v] for v in border)
    tmax = max(area.times[v] for v in border)
    rs_list = [v for v in border if area.times[v] == tmin]
    rg_list = [v for v in border if area.times[v] == tmax]
    if len(rs_list) != 1 or len(rg_list) != 1:
        return None
    rs, rg = rs_list[0], rg_list[0]

    def cell_at(i: int) -> int:
        return coords[outer[i][0]]

    def hits(gap: list[int], v: int) -> list[int]:
        return [k for k, i in enumerate(gap) if cell_at(i) == v]

    rg_a, rg_b = hits(gap_after1, rg), hits(gap_after2, rg)
    rs_a, rs_b = hits(gap_after1, rs), hits(gap_after2, rs)
    if bool(rg_a) == bool(rg_b):
        return None
    if rg_a:
        if not rs_b or rs_a:
            return None
        gap, pos = gap_after1, rg_a
        # E1 run ends where the gap starts: a2's barrier runs from there to R_g
        b2 = [cell_at(i) for i in gap[: pos[0] + 1]]
        b1 = [cell_at(i) for i in gap[pos[-1]:]]
        r2, r1 = cell_at(gap[0]), cell_at(gap[-1])
    else:
        if not rs_a or rs_b:
            return None
        gap, pos = gap_after2, rg_b
        b1 = [cell_at(i) for i in gap[: pos[0] + 1]]
        b2 = [cell_at(i) for i in gap[pos[-1]:]]
        r1, r2 = cell_at(gap[0]), cell_at(gap[-1])
    return BorderScan(rs, rg, r1, r2, list(dict.fromkeys(b1)), list(dict.fromkeys(b2)))


def generate_and_classify_gr(
    conflict: Conflict,
    area: ConflictingArea,
    scan: BorderScan,
    mdd1: MDD,
    mdd2: MDD,
    paths: Sequence[Sequence[int]],
    grid: GridMap,
) -> RectangleFinding | None:
    n1 = [(v, area.times[v]) for v in scan.barrier1]
    n2 = [(v, area.times[v]) for v in scan.barrier2]
    finding = RectangleFinding(
        conflict.a1,
        conflict.a2,
        barrier_constraint(conflict.a1, n1),
        barrier_constraint(conflict.a2, n2),
        Cardinality.NON,
        grid.coords(scan.rs),
        grid.coords(scan.rg),
        grid.coords(scan.r1),
        grid.coords(scan.r2),
        len(area.times),
    )
    if not blocks_current_paths(finding, paths):
        return None
    cut1 = blocks_all_paths(mdd1, n1)
    cut2 = blocks_all_paths(mdd2, n2)
    if cut1 and cut2:
        finding.cardinality = Cardinality.CARDINAL
    elif cut1 or cut2:
        finding.cardinality = Cardinality.SEMI
    return finding


def detect_generalized_rectangle(
    conflict: Conflict, grid: GridMap, paths: Sequence[Sequence[int]], mdd1: MDD, mdd2: MDD
) -> RectangleFinding | None:
    area = find_conflicting_area(conflict, mdd1, mdd2, grid)
    if area is None:
        return None
    scan = scan_border_and_holes(area, grid)
    if scan is None:
        return None
    return generate_and_classify_gr(conflict, area, scan, mdd1, mdd2, paths, grid)
