"""Admissible CT-node heuristics: cardinal conflict graph and weighted dependency graph."""

from __future__ import annotations

from typing import Callable, Iterable, Sequence

from .conflicts import Cardinality
from .constraints import INF, Constraint, Kind, range_constraint
from .context import NodeContext
from .framework import ReasoningOutcome


def _components(nodes: Iterable[int], adj: dict[int, set[int]]) -> list[list[int]]:
    seen: set[int] = set()
    comps = []
    for s in sorted(nodes):
        if s in seen:
            continue
        comp, stack = [], [s]
        seen.add(s)
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def minimum_vertex_cover(edges: Iterable[tuple[int, int]]) -> int:
    """Exact MVC size by branching on an endpoint of an uncovered edge."""
    es = {(min(a, b), max(a, b)) for a, b in edges if a != b}
    if not es:
        return 0
    adj: dict[int, set[int]] = {}
    for a, b in es:
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    total = 0
    for comp in _components(adj, adj):
        comp_edges = [(a, b) for a, b in es if a in comp]
        total += _mvc_component(comp_edges)
    return total


def _mvc_component(edges: list[tuple[int, int]]) -> int:
    best = [len({v for e in edges for v in e})]

    def rec(rem: list[tuple[int, int]], size: int) -> None:
        if size >= best[0]:
            return
        if not rem:
            best[0] = size
            return
        # either endpoint of the first edge must be in the cover
        a, b = rem[0]
        for v in (a, b):
            rec([e for e in rem if v not in e], size + 1)

    rec(edges, 0)
    return best[0]


def weighted_vertex_cover(weights: dict[tuple[int, int], int]) -> int:
    """Minimum sum of nonnegative integer vertex values with x_a + x_b >= w_ab for every edge."""
    ws = {}
    for (a, b), w in weights.items():
        if w <= 0 or a == b:
            continue
        key = (min(a, b), max(a, b))
        ws[key] = max(ws.get(key, 0), w)
    if not ws:
        return 0
    adj: dict[int, set[int]] = {}
    for a, b in ws:
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    total = 0
    for comp in _components(adj, adj):
        cw = {e: w for e, w in ws.items() if e[0] in comp}
        total += _wvc_component(comp, cw, adj)
    return total


def _wvc_component(nodes: list[int], ws: dict[tuple[int, int], int], adj: dict[int, set[int]]) -> int:
    order = sorted(nodes, key=lambda v: -len(adj[v]))

    def w(a: int, b: int) -> int:
        return ws.get((min(a, b), max(a, b)), 0)

    maxw = {v: max(w(v, u) for u in adj[v]) for v in order}
    # every vertex at its heaviest incident weight is always feasible
    best = [sum(maxw.values())]
    vals: dict[int, int] = {}

    def lower_bound(k: int) -> int:
        # residual demands on unassigned vertices from assigned neighbours, plus disjoint edges
        need = {}
        for v in order[k:]:
            r = 0
            for u in adj[v]:
                if u in vals:
                    r = max(r, w(u, v) - vals[u])
            need[v] = r
        lb = sum(need.values())
        used: set[int] = set()
        extra = 0
        for (a, b), wt in sorted(ws.items(), key=lambda kv: -kv[1]):
            if a in vals or b in vals or a in used or b in used:
                continue
            gain = wt - need[a] - need[b]
            if gain > 0:
                extra += gain
                used.add(a)
                used.add(b)
        return lb + extra

    def rec(k: int, acc: int) -> None:
        if acc + lower_bound(k) >= best[0]:
            return
        if k == len(order):
            best[0] = acc
            return
        v = order[k]
        lo = 0
        for u in adj[v]:
            if u in vals:
                lo = max(lo, w(u, v) - vals[u])
        hi = max(lo, maxw[v])
        for x in range(lo, hi + 1):
            vals[v] = x
            rec(k + 1, acc + x)
            del vals[v]

    rec(0, 0)
    return best[0]


def cg_heuristic(outcomes: Sequence[ReasoningOutcome]) -> int:
    """MVC of the graph whose edges join agents with a cardinal conflict."""
    edges = {(o.conflict.a1, o.conflict.a2) for o in outcomes if o.cardinality == Cardinality.CARDINAL}
    return minimum_vertex_cover(edges)


def pair_constraints(constraints: Iterable[Constraint], a: int, b: int) -> list[Constraint]:
    """Constraints of a and b renumbered to agents 0 and 1 for a two-agent sub-search.

    Length-upper constraints of any third agent become open-ended range
    constraints on its target for both agents.
    """
    remap = {a: 0, b: 1}
    out: list[Constraint] = []
    for c in constraints:
        if c.agent in remap:
            out.append(_replace_agent(c, remap[c.agent]))
        elif c.kind is Kind.LENGTH_UPPER:
            out.append(range_constraint(0, c.vertex, c.bound, INF))
            out.append(range_constraint(1, c.vertex, c.bound, INF))
    return out


def _replace_agent(c: Constraint, agent: int) -> Constraint:
    return Constraint(c.kind, agent, c.vertex, c.edge, c.t, c.t_max, c.nodes, c.bound)


# returns ("solved", cost) | ("infeasible", None) | ("unsolved", None)
PairSolver = Callable[[object, list[Constraint]], tuple[str, float | None]]


def wdg_heuristic(
    ctx: NodeContext,
    outcomes: Sequence[ReasoningOutcome],
    pair_solver: PairSolver,
    memo: dict,
) -> float:
    """Edge-weighted vertex cover over the pairwise cost increases of conflicting agents.

    Returns INF when some pair has no conflict-free solution under the node's constraints.
    """
    pairs: dict[tuple[int, int], bool] = {}
    for o in outcomes:
        a, b = sorted((o.conflict.a1, o.conflict.a2))
        pairs[(a, b)] = pairs.get((a, b), False) or o.cardinality == Cardinality.CARDINAL
    weights: dict[tuple[int, int], int] = {}
    for (a, b), cardinal in sorted(pairs.items()):
        key = (a, b, ctx.key(a), ctx.key(b))
        if key in memo:
            w = memo[key]
        else:
            sub = ctx.instance.subset([a, b])
            cons = pair_constraints(ctx.constraints, a, b)
            status, cost = pair_solver(sub, cons)
            if status == "solved":
                w = max(0, int(cost) - ctx.length(a) - ctx.length(b))
            elif status == "infeasible":
                w = INF
            else:
                w = 1 if cardinal else 0
            memo[key] = w
        if w == INF:
            return INF
        weights[(a, b)] = w
    return weighted_vertex_cover(weights)
