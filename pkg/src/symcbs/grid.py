"""Grid maps, agents and instances, plus movingai file I/O.

Vertices are integer ids ``y * width + x`` so that hot loops work on ints.
Coordinates follow the movingai convention: (x, y) = (column, row) with row
0 at the top.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

INF = math.inf

PASSABLE = frozenset(".G")
BLOCKED = frozenset("@OTSW")


class MapFormatError(ValueError):
    """Raised for malformed map or scenario text; the message names the line."""


class GridMap:
    """A 4-neighbor grid with blocked cells."""

    def __init__(self, width: int, height: int, blocked: Iterable[bool] | None = None):
        if width <= 0 or height <= 0:
            raise ValueError("width and height must be positive")
        self.width = width
        self.height = height
        cells = list(blocked) if blocked is not None else [False] * (width * height)
        if len(cells) != width * height:
            raise ValueError("blocked flags do not match grid size")
        self.blocked: tuple[bool, ...] = tuple(bool(c) for c in cells)
        self._neighbors: list[tuple[int, ...]] = []
        for v in range(width * height):
            if self.blocked[v]:
                self._neighbors.append(())
                continue
            x, y = v % width, v // width
            nbrs = []
            for dx, dy in ((0, -1), (1, 0), (0, 1), (-1, 0)):
                nx, ny = x + dx, y + dy
                if 0 <= nx < width and 0 <= ny < height and not self.blocked[ny * width + nx]:
                    nbrs.append(ny * width + nx)
            self._neighbors.append(tuple(nbrs))
        self.vertices: tuple[int, ...] = tuple(v for v in range(width * height) if not self.blocked[v])
        self._dist_cache: dict[int, list[float]] = {}

    @classmethod
    def from_rows(cls, rows: Sequence[str]) -> "GridMap":
        """Build from rows of map symbols (same alphabet as movingai files)."""
        height = len(rows)
        width = len(rows[0]) if rows else 0
        flags = []
        for row in rows:
            if len(row) != width:
                raise ValueError("ragged rows")
            for ch in row:
                if ch in PASSABLE:
                    flags.append(False)
                elif ch in BLOCKED:
                    flags.append(True)
                else:
                    raise ValueError(f"unknown map symbol {ch!r}")
        return cls(width, height, flags)

    @classmethod
    def open(cls, width: int, height: int) -> "GridMap":
        return cls(width, height)

    # geometry -----------------------------------------------------------
    def vertex(self, x: int, y: int) -> int:
        return y * self.width + x

    def coords(self, v: int) -> tuple[int, int]:
        return v % self.width, v // self.width

    def in_bounds(self, x: int, y: int) -> bool:
        return 0 <= x < self.width and 0 <= y < self.height

    def is_free(self, x: int, y: int) -> bool:
        return self.in_bounds(x, y) and not self.blocked[y * self.width + x]

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._neighbors[v]

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_edges(self) -> int:
        return sum(len(n) for n in self._neighbors) // 2

    def degree(self, v: int) -> int:
        return len(self._neighbors[v])

    def distances(self, source: int) -> list[float]:
        """Cached BFS distances from ``source``; see :func:`true_distance`."""
        table = self._dist_cache.get(source)
        if table is None:
            table = true_distance(self, source)
            self._dist_cache[source] = table
        return table

    def rows(self) -> list[str]:
        out = []
        for y in range(self.height):
            out.append("".join("@" if self.blocked[y * self.width + x] else "." for x in range(self.width)))
        return out

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, GridMap)
            and self.width == other.width
            and self.height == other.height
            and self.blocked == other.blocked
        )

    def __hash__(self) -> int:
        return hash((self.width, self.height, self.blocked))

    def __repr__(self) -> str:
        return f"GridMap({self.width}x{self.height}, free={self.num_vertices})"


@dataclass(frozen=True)
class AgentSpec:
    start: int
    target: int


@dataclass
class Instance:
    map: GridMap
    agents: list[AgentSpec]
    name: str = ""
    _checked: bool = field(default=False, repr=False)

    def __post_init__(self) -> None:
        if not self.agents:
            raise ValueError("an instance needs at least one agent")
        starts = [a.start for a in self.agents]
        targets = [a.target for a in self.agents]
        if len(set(starts)) != len(starts):
            raise ValueError("agents must have distinct starts")
        if len(set(targets)) != len(targets):
            raise ValueError("agents must have distinct targets")
        for i, a in enumerate(self.agents):
            for v in (a.start, a.target):
                if not 0 <= v < len(self.map.blocked) or self.map.blocked[v]:
                    raise ValueError(f"agent {i} uses a blocked or out-of-range vertex")
            if self.map.distances(a.target)[a.start] == INF:
                raise ValueError(f"agent {i}: target unreachable from start")

    @property
    def num_agents(self) -> int:
        return len(self.agents)

    def starts(self) -> list[int]:
        return [a.start for a in self.agents]

    def targets(self) -> list[int]:
        return [a.target for a in self.agents]

    def dist_to_target(self, agent: int) -> list[float]:
        return self.map.distances(self.agents[agent].target)

    def subset(self, agent_ids: Sequence[int]) -> "Instance":
        return Instance(self.map, [self.agents[i] for i in agent_ids], self.name)

    @classmethod
    def from_coords(cls, grid: GridMap, pairs: Sequence[tuple[tuple[int, int], tuple[int, int]]], name: str = "") -> "Instance":
        agents = [AgentSpec(grid.vertex(*s), grid.vertex(*g)) for s, g in pairs]
        return cls(grid, agents, name)


def true_distance(grid: GridMap, source: int) -> list[float]:
    """Breadth-first move counts from ``source``; unreachable cells get INF."""
    if not 0 <= source < len(grid.blocked) or grid.blocked[source]:
        raise ValueError("distance source must be an unblocked cell")
    dist: list[float] = [INF] * len(grid.blocked)
    dist[source] = 0
    queue = deque([source])
    nbrs = grid._neighbors
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for w in nbrs[u]:
            if dist[w] == INF:
                dist[w] = du
                queue.append(w)
    return dist


def vertex_degree(grid: GridMap, v: int) -> int:
    return grid.degree(v)


# movingai I/O -----------------------------------------------------------

def _lines(text: str) -> list[str]:
    return [line.rstrip("\r") for line in text.split("\n")]


def parse_map(text: str) -> GridMap:
    lines = _lines(text)
    header: dict[str, str] = {}
    idx = 0
    expected = ["type", "height", "width", "map"]
    for key in expected:
        while idx < len(lines) and not lines[idx].strip():
            idx += 1
        if idx >= len(lines):
            raise MapFormatError(f"line {idx + 1}: missing '{key}' header")
        parts = lines[idx].split()
        if parts[0] != key:
            raise MapFormatError(f"line {idx + 1}: expected '{key}' header, got {lines[idx]!r}")
        if key == "map":
            if len(parts) != 1:
                raise MapFormatError(f"line {idx + 1}: malformed 'map' line")
        else:
            if len(parts) != 2:
                raise MapFormatError(f"line {idx + 1}: malformed '{key}' header")
            header[key] = parts[1]
        idx += 1
    try:
        height = int(header["height"])
        width = int(header["width"])
    except ValueError as exc:
        raise MapFormatError(f"line 2-3: non-integer map dimensions ({exc})") from None
    if height <= 0 or width <= 0:
        raise MapFormatError("line 2-3: map dimensions must be positive")
    flags: list[bool] = []
    for row in range(height):
        line_no = idx + row + 1
        if idx + row >= len(lines):
            raise MapFormatError(f"line {line_no}: expected {height} map rows, file ended")
        line = lines[idx + row]
        if len(line) != width:
            raise MapFormatError(f"line {line_no}: row has {len(line)} symbols, expected {width}")
        for col, ch in enumerate(line):
            if ch in PASSABLE:
                flags.append(False)
            elif ch in BLOCKED:
                flags.append(True)
            else:
                raise MapFormatError(f"line {line_no}: unknown symbol {ch!r} at column {col}")
    for extra in range(idx + height, len(lines)):
        if lines[extra].strip():
            raise MapFormatError(f"line {extra + 1}: unexpected content after the map rows")
    return GridMap(width, height, flags)


def serialize_map(grid: GridMap) -> str:
    rows = grid.rows()
    return "type octile\nheight {}\nwidth {}\nmap\n{}\n".format(grid.height, grid.width, "\n".join(rows))


def parse_scen(text: str, grid: GridMap) -> list[AgentSpec]:
    lines = _lines(text)
    if not lines or lines[0].split() not in (["version", "1"], ["version", "1.0"]):
        raise MapFormatError("line 1: expected 'version 1'")
    agents: list[AgentSpec] = []
    for i, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        fields = line.split("\t") if "\t" in line else line.split()
        fields = [f for f in fields if f != ""]
        if len(fields) != 9:
            raise MapFormatError(f"line {i}: expected 9 fields, got {len(fields)}")
        try:
            sx, sy, gx, gy = (int(f) for f in fields[4:8])
            float(fields[8])
        except ValueError:
            raise MapFormatError(f"line {i}: non-numeric coordinate or distance") from None
        for label, (x, y) in (("start", (sx, sy)), ("target", (gx, gy))):
            if not grid.in_bounds(x, y):
                raise MapFormatError(f"line {i}: {label} ({x},{y}) out of bounds")
            if grid.blocked[grid.vertex(x, y)]:
                raise MapFormatError(f"line {i}: {label} ({x},{y}) is blocked")
        agents.append(AgentSpec(grid.vertex(sx, sy), grid.vertex(gx, gy)))
    return agents


def serialize_scen(instance: Instance, map_name: str = "map") -> str:
    grid = instance.map
    out = ["version 1"]
    for a in instance.agents:
        sx, sy = grid.coords(a.start)
        gx, gy = grid.coords(a.target)
        d = grid.distances(a.target)[a.start]
        out.append(f"0\t{map_name}\t{grid.width}\t{grid.height}\t{sx}\t{sy}\t{gx}\t{gy}\t{float(d)}")
    return "\n".join(out) + "\n"


def load_instance(map_text: str, scen_text: str, num_agents: int, offset: int = 0, name: str = "") -> Instance:
    grid = parse_map(map_text)
    specs = parse_scen(scen_text, grid)
    if offset + num_agents > len(specs):
        raise MapFormatError(f"scenario has {len(specs)} rows, need {offset + num_agents}")
    return Instance(grid, specs[offset : offset + num_agents], name)
