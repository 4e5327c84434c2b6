"""Acceptance criteria.  Each test prints one PASS/FAIL line; run with ``pytest tests/test_acceptance.py -v``."""

import random
import time

import pytest

from symcbs.cbs import CONFIG_NAMES, individual_cost, solve
from symcbs.conflicts import SymClass, detect_conflicts
from symcbs.constraints import build_constraint_table, vertex_constraint
from symcbs.fixtures import builtin_map, corridor, pseudo_corridor, random_grid, random_instance, square_crossing, target_row
from symcbs.grid import GridMap
from symcbs.mdd import build_mdd
from symcbs.oracle import joint_state_astar, verify_mutually_disjunctive
from symcbs.spacetime import plan_shortest_path

pytestmark = pytest.mark.acceptance


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")

    return emit


def test_criterion_1_oracle_optimality(report):
    configs = ["none", "r", "rm", "gr", "t", "gc", "rtc", "cbsh2"]
    t0 = time.perf_counter()
    wrong, solved = [], 0
    for i in range(200):
        g = random_grid(8, 8, 0.2, seed=1000 + i)
        inst = random_instance(g, 2 + i % 3, seed=i)
        opt, _ = joint_state_astar(inst)
        for cfg in configs:
            st = solve(inst, cfg, time_limit=30)
            if st.solved:
                solved += 1
                if st.cost != opt:
                    wrong.append((i, cfg, st.cost, opt))
    elapsed = time.perf_counter() - t0
    ok = not wrong and elapsed < 300
    report(1, ok, f"{solved} solves, {len(wrong)} cost mismatches vs joint A*, {elapsed:.0f}s")
    assert not wrong, wrong[:5]
    assert elapsed < 300


def test_criterion_2_corridor_blowup(report):
    t0 = time.perf_counter()
    counts, gc_counts, problems = {}, {}, []
    for k in range(2, 8):
        inst = corridor(k)
        counts[k] = solve(inst, "none", time_limit=30).expanded
        st = solve(inst, "gc", time_limit=30)
        gc_counts[k] = st.expanded
        target = 2 ** (k + 1)
        if not target / 2 <= counts[k] <= target * 2:
            problems.append(f"k={k}: {counts[k]} not within x2 of {target}")
        if gc_counts[k] > 3:
            problems.append(f"k={k}: GC took {gc_counts[k]}")
    for k in range(3, 8):
        if counts[k] < 2 * counts[k - 1]:
            problems.append(f"k={k}: {counts[k]} does not double {counts[k - 1]}")
    inst = corridor(3)
    soc = solve(inst, "gc").cost
    if soc != individual_cost(inst) + 4:
        problems.append(f"k=3 SOC {soc} != root + 4")
    elapsed = time.perf_counter() - t0
    ok = not problems and elapsed < 30
    report(2, ok, f"none {counts}, gc {gc_counts}, {elapsed:.1f}s {'; '.join(problems)}")
    assert not problems
    assert elapsed < 30


def test_criterion_3_target_growth(report):
    t0 = time.perf_counter()
    problems, seen = [], {}
    for d in (10, 20, 30, 40, 50):
        inst = target_row(d)
        plain = solve(inst, "none", time_limit=30).expanded
        with_t = solve(inst, "t", time_limit=30).expanded
        seen[d] = (plain, with_t)
        if abs(plain - d) > 0.2 * d:
            problems.append(f"d={d}: {plain} expansions without T")
        if with_t > 3:
            problems.append(f"d={d}: {with_t} expansions with T")
    pruned = []
    solve(target_row(3), "t", on_split=lambda n, o, ch: pruned.append((o.symclass, ch[1] is None)))
    if pruned[:1] != [(SymClass.TARGET, True)]:
        problems.append(f"right child not pruned: {pruned[:1]}")
    elapsed = time.perf_counter() - t0
    ok = not problems and elapsed < 30
    report(3, ok, f"(none, t) by distance {seen}, {elapsed:.1f}s {'; '.join(problems)}")
    assert not problems
    assert elapsed < 30


def test_criterion_4_rectangle_blowup(report):
    budget = 60.0
    t0 = time.perf_counter()
    problems = []
    for n in range(4, 11):
        inst = square_crossing(n)
        for cfg in ("r", "gr"):
            st = solve(inst, cfg, time_limit=10)
            if not st.solved or st.expanded > 3 or st.cost != individual_cost(inst) + 1:
                problems.append(f"n={n} {cfg}: {st.status} {st.expanded} exp, SOC {st.cost}")
    counts = {}
    for n in range(4, 11):
        left = budget - (time.perf_counter() - t0)
        if left <= 0:
            problems.append(f"n={n}: no time left")
            break
        st = solve(square_crossing(n), "none", time_limit=left)
        if not st.solved:
            problems.append(f"n={n}: unsolved after {st.expanded} expansions")
            break
        counts[n] = st.expanded
    for n in counts:
        if n - 1 in counts and counts[n] <= counts[n - 1]:
            problems.append(f"n={n}: not increasing")
        if n - 2 in counts and counts[n] < 2 * counts[n - 2]:
            problems.append(f"n={n}: not doubling over two steps")
    elapsed = time.perf_counter() - t0
    ok = not problems and elapsed < budget
    report(4, ok, f"none {counts}, {elapsed:.0f}s {'; '.join(problems)}")
    assert not problems
    assert elapsed < budget


def test_criterion_5_pseudo_corridor(report):
    t0 = time.perf_counter()
    inst = pseudo_corridor()
    root = individual_cost(inst)
    problems, seen = [], {}
    for cfg in ("pc", "gc"):
        st = solve(inst, cfg, time_limit=10)
        seen[cfg] = (st.expanded, st.cost)
        if st.expanded != 1 or st.cost != root + 2:
            problems.append(f"{cfg}: {st.expanded} splits, SOC {st.cost} vs root {root}")
    plain = solve(inst, "none", time_limit=10)
    seen["none"] = (plain.expanded, plain.cost)
    if plain.expanded <= 4:
        problems.append(f"without pseudo-corridor reasoning only {plain.expanded} expansions")
    elapsed = time.perf_counter() - t0
    ok = not problems and elapsed < 10
    report(5, ok, f"(expanded, SOC) {seen}, {elapsed:.1f}s {'; '.join(problems)}")
    assert not problems
    assert elapsed < 10


def test_criterion_6_mutual_disjunctiveness(report):
    t0 = time.perf_counter()
    checked, bad, unsure = 0, [], 0
    for i in range(100):
        g = random_grid(8, 8, 0.2, seed=2000 + i)
        inst = random_instance(g, 2 + i % 3, seed=2000 + i)
        for cfg in CONFIG_NAMES:
            splits = []
            solve(inst, cfg, time_limit=10, on_split=lambda node, o, ch, acc=splits: acc.append((node.constraints, o)))
            for cons, o in splits:
                v = verify_mutually_disjunctive(inst, o.conflict.a1, o.conflict.a2, o.c1, o.c2, cons, slack=3)
                checked += 1
                if v.status == "counterexample":
                    bad.append((i, cfg, o.symclass.name))
                elif v.status == "inconclusive":
                    unsure += 1
    ok = not bad and checked > 0
    report(6, ok, f"{checked} splits verified, {len(bad)} counterexamples, {unsure} inconclusive, {time.perf_counter() - t0:.0f}s")
    assert checked > 0
    assert not bad, bad[:5]


def _walk_to(rng, inst, agent, table, v, t):
    """Random constraint-respecting walk from the start that is at v at time t, or None."""
    g = inst.map
    dist = g.distances(v)
    cur = inst.agents[agent].start
    out = [cur]
    for step in range(1, t + 1):
        moves = [w for w in g.neighbors(cur) + (cur,) if dist[w] <= t - step and not table.is_constrained(w, step)]
        moves = [w for w in moves if (cur, w, step) not in table.edges]
        if not moves:
            return None
        cur = rng.choice(moves)
        out.append(cur)
    return out if cur == v else None


def test_criterion_7_mdd_prefix_property(report):
    rng = random.Random(7)
    samples, failures, seed = 0, [], 0
    while samples < 200:
        seed += 1
        g = random_grid(rng.randint(4, 8), rng.randint(4, 8), 0.2, seed=seed)
        inst = random_instance(g, 1, seed=seed)
        vs = list(g.vertices)
        cons = [vertex_constraint(0, rng.choice(vs), rng.randint(1, 6)) for _ in range(rng.randint(0, 3))]
        table = build_constraint_table(cons, 0, inst.agents[0].target)
        p = plan_shortest_path(inst, 0, table)
        if p is None or len(p) < 3:
            continue
        mdd = build_mdd(inst, 0, table, len(p) - 1)
        t = rng.randint(1, len(p) - 2)
        v = rng.choice(sorted(mdd.layers[t]))
        walk = None
        for _ in range(50):
            walk = _walk_to(rng, inst, 0, table, v, t)
            if walk is not None:
                break
        if walk is None:
            continue
        samples += 1
        if any(w not in mdd.layers[i] for i, w in enumerate(walk)):
            failures.append((seed, v, t, walk))
    report(7, not failures, f"{samples} (MDD, node, path) samples, {len(failures)} failures")
    assert not failures


def test_criterion_8_node_reduction(report):
    grid = builtin_map("random-32-32-20")
    t0 = time.perf_counter()
    common = better = 0
    for seed in range(50):
        inst = random_instance(grid, 20, seed=seed)
        plain = solve(inst, "none", time_limit=30)
        rtc = solve(inst, "rtc", time_limit=30)
        if plain.solved and rtc.solved:
            assert plain.cost == rtc.cost
            common += 1
            better += rtc.expanded <= plain.expanded
    elapsed = time.perf_counter() - t0
    rate = better / common if common else 0.0
    ok = common > 0 and rate >= 0.7 and elapsed < 3600
    report(8, ok, f"RTC <= None on {better}/{common} commonly solved ({rate:.0%}), {elapsed:.0f}s")
    assert common > 0 and rate >= 0.7
    assert elapsed < 3600


def test_criterion_9_two_agent_single_branch(report):
    grid = GridMap.open(16, 16)
    pairs = hits = 0
    seed = 0
    while pairs < 200:
        inst = random_instance(grid, 2, seed=seed)
        seed += 1
        paths = [plan_shortest_path(inst, a, build_constraint_table([], a, inst.agents[a].target)) for a in range(2)]
        if not detect_conflicts(paths):
            continue
        pairs += 1
        st = solve(inst, "rtc", time_limit=30)
        hits += st.solved and st.expanded <= 1
    rate = hits / pairs
    report(9, rate >= 0.8, f"RTC resolved {hits}/{pairs} conflicting pairs within one split ({rate:.0%})")
    assert rate >= 0.8
