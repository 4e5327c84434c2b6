"""Conflict-based search over a constraint tree with pluggable heuristics and symmetry reasoning."""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Sequence

from .conflicts import Conflict, SymClass, detect_conflicts
from .constraints import INF, Constraint, agents_to_replan, binds, build_constraint_table
from .context import NodeContext, SearchCache
from .corridor import CorridorMode
from .framework import ReasoningConfig, ReasoningOutcome, reason_symmetry, select_conflict
from .grid import Instance
from .heuristics import cg_heuristic, wdg_heuristic
from .spacetime import ConflictAvoidance, plan_shortest_path

HEURISTICS = ("none", "cg", "wdg")

_CORRIDOR_MODES = {
    "c": CorridorMode(generalized=False, pseudo=False, corridor_target=False),
    "pc": CorridorMode(generalized=False, pseudo=True, corridor_target=False),
    "stc": CorridorMode(generalized=True, pseudo=False, corridor_target=True),
    "gc": CorridorMode(generalized=True, pseudo=True, corridor_target=True),
}


@dataclass(frozen=True)
class SolverConfig:
    name: str = "none"
    heuristic: str = "cg"
    reasoning: ReasoningConfig = field(default_factory=ReasoningConfig)
    time_limit: float = 60.0
    node_limit: int | None = None
    # limits for the two-agent searches behind the weighted dependency graph
    pair_time_limit: float = 1.0
    pair_node_limit: int = 200

    def __post_init__(self) -> None:
        if self.heuristic not in HEURISTICS:
            raise ValueError(f"unknown heuristic {self.heuristic!r}")


CONFIG_NAMES = ("cbs", "none", "r", "rm", "gr", "t", "c", "pc", "stc", "gc", "rtc", "cbsh2", "cbsh2-rtc")


def config_from_name(name: str, **overrides) -> SolverConfig:
    """Named configurations.

    ``cbs`` has no heuristic; ``none`` is the cardinal-graph heuristic without
    reasoning; single technique names add that technique; ``rtc`` combines
    generalized rectangles, target and generalized corridors; the ``cbsh2``
    names use the weighted dependency graph.
    """
    key = name.lower()
    heuristic = "cg"
    if key == "cbs":
        heuristic, rc = "none", ReasoningConfig()
    elif key in ("none", "cg", "cbsh"):
        rc = ReasoningConfig()
    elif key in ("r", "rm", "gr"):
        rc = ReasoningConfig(rectangle=key.upper())
    elif key == "t":
        rc = ReasoningConfig(target=True)
    elif key in _CORRIDOR_MODES:
        rc = ReasoningConfig(corridor=_CORRIDOR_MODES[key])
    elif key == "rtc":
        rc = ReasoningConfig(rectangle="GR", target=True, corridor=_CORRIDOR_MODES["gc"])
    elif key in ("cbsh2", "wdg"):
        heuristic, rc = "wdg", ReasoningConfig()
    elif key == "cbsh2-rtc":
        heuristic, rc = "wdg", ReasoningConfig(rectangle="GR", target=True, corridor=_CORRIDOR_MODES["gc"])
    else:
        raise ValueError(f"unknown configuration {name!r}; expected one of {', '.join(CONFIG_NAMES)}")
    return SolverConfig(name=key, heuristic=heuristic, reasoning=rc, **overrides)


@dataclass
class SolveStats:
    status: str = "unsolved"  # solved, unsolved, infeasible
    cost: float = INF
    root_cost: float = INF
    paths: list[list[int]] | None = None
    # nodes split on; the node holding the solution is not counted
    expanded: int = 0
    generated: int = 0
    runtime: float = 0.0
    class_counts: dict[SymClass, int] = field(default_factory=lambda: {c: 0 for c in SymClass})
    f_log: list[float] = field(default_factory=list)

    @property
    def solved(self) -> bool:
        return self.status == "solved"

    def class_percent(self, cls: SymClass) -> float:
        if self.expanded == 0:
            return 0.0
        return 100.0 * self.class_counts[cls] / self.expanded


@dataclass
class CTNode:
    constraints: tuple[Constraint, ...]
    paths: list[list[int]]
    conflicts: list[Conflict]
    cost: int
    f: float
    depth: int = 0
    h: float = 0.0
    evaluated: bool = False
    outcomes: list[ReasoningOutcome] | None = None


SplitHook = Callable[[CTNode, ReasoningOutcome, list[CTNode | None]], None]


def _soc(paths: Sequence[Sequence[int]]) -> int:
    return sum(len(p) - 1 for p in paths)


class _Limits(Exception):
    pass


def solve(
    instance: Instance,
    config: SolverConfig | str = "none",
    initial_constraints: Iterable[Constraint] = (),
    on_split: SplitHook | None = None,
    time_limit: float | None = None,
    node_limit: int | None = None,
) -> SolveStats:
    """Optimal conflict-free plan minimising the sum of path lengths.

    ``initial_constraints`` hold at every node (used for two-agent sub-searches).
    ``on_split`` is called after every branching with the node, the outcome used
    and the two children (None for a pruned child).
    """
    if isinstance(config, str):
        config = config_from_name(config)
    if time_limit is not None or node_limit is not None:
        config = replace(
            config,
            time_limit=config.time_limit if time_limit is None else time_limit,
            node_limit=config.node_limit if node_limit is None else node_limit,
        )
    return _Search(instance, config, tuple(initial_constraints), on_split).run()


class _Search:
    def __init__(self, instance: Instance, config: SolverConfig, initial: tuple[Constraint, ...], on_split):
        self.instance = instance
        self.config = config
        self.initial = initial
        self.on_split = on_split
        self.cache = SearchCache()
        self.memo: dict = {}
        self.stats = SolveStats()
        self.open: list = []
        self.counter = 0
        self.deadline = 0.0

    # low level ------------------------------------------------------------

    def _key(self, constraints: tuple[Constraint, ...], agent: int) -> frozenset:
        return frozenset(c for c in constraints if binds(c, agent))

    def _plan(self, agent: int, constraints: tuple[Constraint, ...], paths: Sequence[Sequence[int] | None]) -> list[int] | None:
        table = self.cache.table(self.instance, agent, self._key(constraints, agent))
        others = ConflictAvoidance(p for i, p in enumerate(paths) if i != agent and p is not None)
        return plan_shortest_path(self.instance, agent, table, others)

    def _push(self, node: CTNode) -> None:
        self.counter += 1
        heapq.heappush(self.open, (node.f, len(node.conflicts), self.counter, node))
        self.stats.generated += 1

    # pair solver for the dependency graph ---------------------------------

    def _pair_solver(self, sub: Instance, cons: list[Constraint]):
        sub_cfg = replace(
            self.config,
            heuristic="cg",
            time_limit=min(self.config.pair_time_limit, max(0.0, self.deadline - time.perf_counter())),
            node_limit=self.config.pair_node_limit,
        )
        st = _Search(sub, sub_cfg, tuple(cons), None).run()
        return st.status, (st.cost if st.solved else None)

    # main loop ------------------------------------------------------------

    def run(self) -> SolveStats:
        st = self.stats
        t0 = time.perf_counter()
        self.deadline = t0 + self.config.time_limit
        try:
            self._run()
        except _Limits:
            st.status = "unsolved"
        st.runtime = time.perf_counter() - t0
        return st

    def _check_limits(self) -> None:
        if time.perf_counter() > self.deadline:
            raise _Limits()
        if self.config.node_limit is not None and self.stats.expanded >= self.config.node_limit:
            raise _Limits()

    def _run(self) -> None:
        st = self.stats
        n = self.instance.num_agents
        paths: list[list[int] | None] = [None] * n
        for i in range(n):
            p = self._plan(i, self.initial, paths)
            if p is None:
                st.status = "infeasible"
                return
            paths[i] = p
        root_paths: list[list[int]] = [p for p in paths if p is not None]
        cost = _soc(root_paths)
        st.root_cost = cost
        root = CTNode(self.initial, root_paths, detect_conflicts(root_paths), cost, cost)
        self._push(root)
        cfg = self.config
        while self.open:
            self._check_limits()
            key_f, _, _, node = heapq.heappop(self.open)
            if not node.conflicts:
                st.f_log.append(node.f)
                st.status = "solved"
                st.cost = node.cost
                st.paths = node.paths
                return
            if not node.evaluated:
                ctx = NodeContext(self.instance, node.paths, node.constraints, self.cache)
                node.outcomes = [reason_symmetry(c, ctx, cfg.reasoning) for c in node.conflicts]
                if cfg.heuristic == "cg":
                    h = cg_heuristic(node.outcomes)
                elif cfg.heuristic == "wdg":
                    h = wdg_heuristic(ctx, node.outcomes, self._pair_solver, self.memo)
                else:
                    h = 0
                if h == INF:
                    continue
                node.h = max(h, node.f - node.cost)
                node.f = node.cost + node.h
                node.evaluated = True
                if node.f > key_f:
                    self.counter += 1
                    heapq.heappush(self.open, (node.f, len(node.conflicts), self.counter, node))
                    continue
            st.f_log.append(node.f)
            self._expand(node)
        st.status = "infeasible"

    def _expand(self, node: CTNode) -> None:
        st = self.stats
        outcome = select_conflict(node.outcomes)
        st.expanded += 1
        st.class_counts[outcome.symclass] += 1
        children: list[CTNode | None] = []
        for cs in outcome.constraint_sets:
            child = self._child(node, cs)
            children.append(child)
            if child is not None:
                self._push(child)
        node.outcomes = None
        if self.on_split is not None:
            self.on_split(node, outcome, children)

    def _child(self, node: CTNode, new: tuple[Constraint, ...]) -> CTNode | None:
        constraints = node.constraints + tuple(new)
        paths: list[list[int]] = list(node.paths)
        for a in agents_to_replan(new, paths):
            p = self._plan(a, constraints, paths)
            if p is None:
                return None
            paths[a] = p
        cost = _soc(paths)
        assert cost >= node.cost, "child cost below parent cost"
        f = max(cost, node.cost + node.h)
        return CTNode(constraints, paths, detect_conflicts(paths), cost, f, node.depth + 1)


def validate_solution(instance: Instance, paths: Sequence[Sequence[int]]) -> None:
    """Raise ValueError unless ``paths`` is a conflict-free plan for ``instance``."""
    if len(paths) != instance.num_agents:
        raise ValueError("wrong number of paths")
    grid = instance.map
    for i, (p, a) in enumerate(zip(paths, instance.agents)):
        if not p or p[0] != a.start or p[-1] != a.target:
            raise ValueError(f"agent {i}: path does not join start to target")
        for u, v in zip(p, p[1:]):
            if u != v and v not in grid.neighbors(u):
                raise ValueError(f"agent {i}: illegal move {u}->{v}")
    if detect_conflicts(paths):
        raise ValueError("plan has conflicts")


def individual_cost(instance: Instance) -> int:
    """Sum of unconstrained shortest path lengths."""
    return sum(int(instance.map.distances(a.target)[a.start]) for a in instance.agents)


def plan_table(instance: Instance, agent: int, constraints: Iterable[Constraint]):
    return build_constraint_table([c for c in constraints if binds(c, agent)], agent, instance.agents[agent].target)
