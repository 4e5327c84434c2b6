"""Per-node view of the search state shared by the reasoning techniques."""

from __future__ import annotations

from typing import Iterable, Sequence

from .conflicts import Cardinality, Conflict, classify_conflict
from .constraints import Constraint, ConstraintTable, binds, build_constraint_table
from .grid import Instance
from .mdd import MDD, build_mdd
from .spacetime import earliest_arrival


class SearchCache:
    """Tables, MDDs and earliest arrivals shared across the nodes of one search."""

    def __init__(self) -> None:
        self.tables: dict[tuple[int, frozenset], ConstraintTable] = {}
        self.mdds: dict[tuple[int, frozenset, int], MDD] = {}
        self.arrivals: dict[tuple, float] = {}

    def table(self, instance: Instance, agent: int, key: frozenset) -> ConstraintTable:
        k = (agent, key)
        tab = self.tables.get(k)
        if tab is None:
            tab = build_constraint_table(key, agent, instance.agents[agent].target)
            self.tables[k] = tab
        return tab


class NodeContext:
    """Instance, plan and constraints of one CT node, with lazy tables and MDDs."""

    def __init__(
        self,
        instance: Instance,
        paths: Sequence[Sequence[int]],
        constraints: Iterable[Constraint] = (),
        cache: SearchCache | None = None,
    ):
        self.instance = instance
        self.paths = paths
        self.constraints = tuple(constraints)
        self.cache = cache if cache is not None else SearchCache()
        self._keys: dict[int, frozenset] = {}
        self._card: dict[Conflict, Cardinality] = {}

    def key(self, agent: int) -> frozenset:
        k = self._keys.get(agent)
        if k is None:
            k = frozenset(c for c in self.constraints if binds(c, agent))
            self._keys[agent] = k
        return k

    def table(self, agent: int) -> ConstraintTable:
        return self.cache.table(self.instance, agent, self.key(agent))

    def mdd(self, agent: int) -> MDD:
        cost = len(self.paths[agent]) - 1
        k = (agent, self.key(agent), cost)
        m = self.cache.mdds.get(k)
        if m is None:
            m = build_mdd(self.instance, agent, self.table(agent), cost)
            self.cache.mdds[k] = m
        return m

    def cardinality(self, conflict: Conflict) -> Cardinality:
        c = self._card.get(conflict)
        if c is None:
            c = classify_conflict(conflict, self.mdd(conflict.a1), self.mdd(conflict.a2))
            self._card[conflict] = c
        return c

    def arrival(
        self,
        agent: int,
        x: int,
        excluded_edges: Iterable[tuple[int, int]] = (),
        excluded_vertices: Iterable[int] = (),
    ) -> float:
        ee = frozenset(frozenset(e) for e in excluded_edges)
        ev = frozenset(excluded_vertices)
        k = (agent, self.key(agent), x, ee, ev)
        val = self.cache.arrivals.get(k)
        if val is None:
            val = earliest_arrival(
                self.instance,
                agent,
                x,
                self.table(agent),
                excluded_edges=[tuple(e) for e in ee],
                excluded_vertices=ev,
            )
            self.cache.arrivals[k] = val
        return val

    def length(self, agent: int) -> int:
        return len(self.paths[agent]) - 1
