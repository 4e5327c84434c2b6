"""Small hand-built instances exhibiting each symmetry, plus seeded random maps and scenarios.

Cell labels such as "B3" read as column letter (A = x 0) and row number (1 = y 0).
"""

from __future__ import annotations

import random
import re
from collections import deque

from .grid import GridMap, Instance


def cell(label: str) -> tuple[int, int]:
    m = re.fullmatch(r"([A-Z])(\d+)", label)
    if not m:
        raise ValueError(f"bad cell label {label!r}")
    return ord(m.group(1)) - ord("A"), int(m.group(2)) - 1


def _grid(width: int, height: int, free: set[tuple[int, int]]) -> GridMap:
    blocked = [(x, y) not in free for y in range(height) for x in range(width)]
    return GridMap(width, height, blocked)


def crossing_instance() -> Instance:
    """Two agents whose shortest paths collide on an open 4x4 grid."""
    return Instance.from_coords(GridMap.open(4, 4), [(cell("A2"), cell("D3")), (cell("B1"), cell("C4"))], "crossing")


def square_crossing(n: int) -> Instance:
    """Agents cross an n x n open square diagonally; every pair of shortest paths collides."""
    if n < 2:
        raise ValueError("square side must be at least 2")
    size = n + 2
    return Instance.from_coords(GridMap.open(size, size), [((0, 1), (n + 1, n)), ((1, 0), (n, n + 1))], f"square-{n}")


def target_row(d: int) -> Instance:
    """One agent parks on a cell the other must later pass through.

    A single row: a1 starts at x=0 and ends at x=d+1, a2 starts at x=d-1 and
    ends at x=d.  A pocket below x=d-1 lets a2 step aside.
    """
    if d < 2:
        raise ValueError("d must be at least 2")
    width = d + 2
    free = {(x, 0) for x in range(width)} | {(d - 1, 1)}
    grid = _grid(width, 2, free)
    return Instance.from_coords(grid, [((0, 0), (d + 1, 0)), ((d - 1, 0), (d, 0))], f"target-{d}")


def pseudo_corridor() -> Instance:
    """Two open rows joined to side pockets; agents swap sides and must use different rows."""
    free = {(x, y) for x in range(6) for y in (0, 1)}
    free |= {cell(c) for c in ("A3", "A4", "F3", "F4")}
    grid = _grid(6, 4, free)
    return Instance.from_coords(grid, [(cell("A3"), cell("F4")), (cell("F3"), cell("A4"))], "pseudo-corridor")


def corridor(k: int) -> Instance:
    """Corridor of length k on row 3 between two three-cell columns; agents move in opposite directions."""
    if k < 2:
        raise ValueError("corridor length must be at least 2")
    width = k + 1
    free = {(0, y) for y in (1, 2, 3)} | {(k, y) for y in (1, 2, 3)} | {(x, 2) for x in range(width)}
    grid = _grid(width, 4, free)
    return Instance.from_coords(grid, [((0, 3), (k, 3)), ((k, 1), (0, 1))], f"corridor-{k}")


FIXTURES = {
    "fig1-crossing": lambda k=None, d=None: crossing_instance(),
    "fig3-square": lambda k=None, d=None: square_crossing(k or 4),
    "fig5-target": lambda k=None, d=None: target_row(d or 3),
    "table1-target": lambda k=None, d=None: target_row(d or 10),
    "fig7-pseudo": lambda k=None, d=None: pseudo_corridor(),
    "fig8-corridor": lambda k=None, d=None: corridor(k or 3),
}


def fixture(name: str, k: int | None = None, d: int | None = None) -> Instance:
    try:
        make = FIXTURES[name]
    except KeyError:
        raise ValueError(f"unknown fixture {name!r}; expected one of {', '.join(sorted(FIXTURES))}") from None
    return make(k=k, d=d)


# random maps ---------------------------------------------------------------

def largest_component(grid: GridMap) -> list[int]:
    seen: set[int] = set()
    best: list[int] = []
    for s in grid.vertices:
        if s in seen:
            continue
        comp = [s]
        seen.add(s)
        q = deque([s])
        while q:
            v = q.popleft()
            for w in grid.neighbors(v):
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
                    q.append(w)
        if len(comp) > len(best):
            best = comp
    return sorted(best)


def random_grid(width: int, height: int, obstacle_ratio: float, seed: int) -> GridMap:
    """Map with round(ratio * cells) obstacles placed uniformly; cells cut off from the largest open region are blocked too."""
    rng = random.Random(seed)
    cells = [(x, y) for y in range(height) for x in range(width)]
    n_obst = round(obstacle_ratio * len(cells))
    obst = set(rng.sample(cells, n_obst))
    grid = _grid(width, height, set(cells) - obst)
    keep = set(largest_component(grid))
    return GridMap(width, height, [v not in keep for v in range(width * height)])


def random_instance(grid: GridMap, num_agents: int, seed: int, name: str = "") -> Instance:
    """Distinct random starts and targets inside the largest open region."""
    rng = random.Random(seed)
    comp = largest_component(grid)
    if 2 * num_agents > len(comp):
        raise ValueError("map too small for that many agents")
    starts = rng.sample(comp, num_agents)
    targets = rng.sample(comp, num_agents)
    pairs = [(grid.coords(s), grid.coords(g)) for s, g in zip(starts, targets)]
    return Instance.from_coords(grid, pairs, name or f"random-{seed}")


def builtin_map(name: str) -> GridMap:
    """``empty-W-H`` or ``random-W-H-P`` (P percent obstacles, seed 0)."""
    m = re.fullmatch(r"empty-(\d+)-(\d+)", name)
    if m:
        return GridMap.open(int(m.group(1)), int(m.group(2)))
    m = re.fullmatch(r"random-(\d+)-(\d+)-(\d+)", name)
    if m:
        return random_grid(int(m.group(1)), int(m.group(2)), int(m.group(3)) / 100.0, seed=0)
    raise ValueError(f"unknown built-in map {name!r}")
