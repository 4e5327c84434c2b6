"""Multi-valued decision diagrams: all shortest paths of one agent under a table."""

from __future__ import annotations

from typing import Iterable, Iterator

from .constraints import ConstraintTable
from .grid import Instance


class MDD:
    """Layered DAG; ``layers[t]`` is the set of vertices reachable at ``t``.

    ``succ[t][v]`` holds successors of (v, t) in layer t+1.
    """

    def __init__(self, layers: list[set[int]], succ: list[dict[int, set[int]]]):
        self.layers = layers
        self.succ = succ
        self._pred: list[dict[int, set[int]]] | None = None
        self._occ: dict[int, list[int]] | None = None

    @property
    def cost(self) -> int:
        return len(self.layers) - 1

    @property
    def empty(self) -> bool:
        return not self.layers or not self.layers[0]

    def __contains__(self, node: tuple[int, int]) -> bool:
        v, t = node
        return 0 <= t < len(self.layers) and v in self.layers[t]

    def nodes(self) -> Iterator[tuple[int, int]]:
        for t, layer in enumerate(self.layers):
            for v in layer:
                yield v, t

    def edges(self) -> Iterator[tuple[tuple[int, int], tuple[int, int]]]:
        for t, out in enumerate(self.succ):
            for v, ws in out.items():
                for w in ws:
                    yield (v, t), (w, t + 1)

    def has_edge(self, u: int, v: int, t: int) -> bool:
        """Edge (u, t-1) -> (v, t)."""
        return 1 <= t < len(self.layers) and v in self.succ[t - 1].get(u, ())

    @property
    def pred(self) -> list[dict[int, set[int]]]:
        if self._pred is None:
            pred: list[dict[int, set[int]]] = [dict() for _ in self.layers]
            for t, out in enumerate(self.succ):
                for v, ws in out.items():
                    for w in ws:
                        pred[t + 1].setdefault(w, set()).add(v)
            self._pred = pred
        return self._pred

    def occurrences(self) -> dict[int, list[int]]:
        """Vertex -> timesteps at which the MDD contains it (the projection M_i)."""
        if self._occ is None:
            occ: dict[int, list[int]] = {}
            for t, layer in enumerate(self.layers):
                for v in layer:
                    occ.setdefault(v, []).append(t)
            self._occ = occ
        return self._occ

    def layer_at(self, t: int) -> set[int]:
        """Layer t; beyond the last layer the agent is parked at its target."""
        if t < len(self.layers):
            return self.layers[t]
        return self.layers[-1]

    def is_singleton(self, v: int, t: int) -> bool:
        layer = self.layer_at(t)
        return len(layer) == 1 and v in layer

    def dump(self) -> str:
        return "\n".join(f"{t}: " + " ".join(str(v) for v in sorted(layer)) for t, layer in enumerate(self.layers))

    def paths(self) -> Iterator[list[int]]:
        """All source-to-sink paths (exponential; for tests)."""
        if self.empty:
            return
        (s,) = self.layers[0]

        def rec(v: int, t: int, acc: list[int]) -> Iterator[list[int]]:
            if t == self.cost:
                yield list(acc)
                return
            for w in sorted(self.succ[t].get(v, ())):
                acc.append(w)
                yield from rec(w, t + 1, acc)
                acc.pop()

        yield from rec(s, 0, [s])


def build_mdd(instance: Instance, agent: int, table: ConstraintTable, cost: int) -> MDD:
    grid = instance.map
    spec = instance.agents[agent]
    start, goal = spec.start, spec.target
    dist = grid.distances(goal)
    nbrs = grid._neighbors
    if cost < 0 or table.is_constrained(start, 0) or dist[start] > cost:
        return MDD([], [])
    forward: list[set[int]] = [{start}]
    for t in range(cost):
        nt = t + 1
        remaining = cost - nt
        nxt: set[int] = set()
        for v in forward[t]:
            for w in nbrs[v] + (v,):
                if w in nxt or dist[w] > remaining:
                    continue
                if table.is_constrained(w, nt) or (v, w, nt) in table.edges:
                    continue
                nxt.add(w)
        if not nxt:
            return MDD([], [])
        forward.append(nxt)
    if goal not in forward[cost]:
        return MDD([], [])
    layers: list[set[int]] = [set() for _ in range(cost + 1)]
    succ: list[dict[int, set[int]]] = [dict() for _ in range(cost)]
    layers[cost] = {goal}
    for t in range(cost - 1, -1, -1):
        nt = t + 1
        for v in forward[t]:
            for w in nbrs[v] + (v,):
                if w not in layers[nt]:
                    continue
                if (v, w, nt) in table.edges:
                    continue
                if nt == cost and v == goal and w == goal:
                    # waiting into the final layer would make the path shorter
                    continue
                layers[t].add(v)
                succ[t].setdefault(v, set()).add(w)
        if not layers[t]:
            return MDD([], [])
    return MDD(layers, succ)


def find_singletons(mdd: MDD) -> list[tuple[int, int]]:
    return [(next(iter(layer)), t) for t, layer in enumerate(mdd.layers) if len(layer) == 1]


def blocks_all_paths(mdd: MDD, prohibited: Iterable[tuple[int, int]]) -> bool:
    if mdd.empty:
        return True
    banned = set(prohibited)
    frontier = {v for v in mdd.layers[0] if (v, 0) not in banned}
    for t in range(mdd.cost):
        nxt = set()
        for v in frontier:
            for w in mdd.succ[t].get(v, ()):
                if (w, t + 1) not in banned:
                    nxt.add(w)
        if not nxt:
            return True
        frontier = nxt
    return not frontier
