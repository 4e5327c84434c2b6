"""Benchmark runner: solve instances under several configurations and write one CSV row per solve."""

from __future__ import annotations

import argparse
import csv
import io
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Iterable, Sequence

from .cbs import CONFIG_NAMES, config_from_name, solve
from .conflicts import SymClass
from .fixtures import FIXTURES, builtin_map, fixture, random_instance
from .grid import Instance, MapFormatError, load_instance, parse_map, serialize_map

COLUMNS = [
    "map",
    "agents",
    "seed",
    "config",
    "solved",
    "SOC",
    "expanded",
    "generated",
    "runtime_ms",
    "pct_rectangle",
    "pct_target",
    "pct_corridor",
    "pct_vertex_edge",
]


class InputError(Exception):
    pass


def _csv_list(text: str) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def _int_list(text: str) -> list[int]:
    try:
        vals = [int(x) for x in _csv_list(text)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not vals or any(v < 0 for v in vals):
        raise argparse.ArgumentTypeError("expected non-negative integers")
    return vals


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="symcbs-bench", description=__doc__)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--map", help="map file, or built-in empty-W-H / random-W-H-P")
    src.add_argument("--fixture", choices=sorted(FIXTURES), help="built-in instance")
    p.add_argument("--scen", help="scenario file (random scenarios are drawn when omitted)")
    p.add_argument("--agents", type=_int_list, default=[2], help="agent counts, e.g. 2,4,8")
    p.add_argument("--offsets", type=_int_list, default=[0], help="scenario offsets or random seeds")
    p.add_argument("--configs", type=_csv_list, default=["none"], help=f"configurations: {','.join(CONFIG_NAMES)}")
    p.add_argument("--time-limit", type=float, default=60.0)
    p.add_argument("--node-limit", type=int, default=None)
    p.add_argument("--k", type=int, default=None, help="corridor length / square side for fixtures")
    p.add_argument("--d", type=int, default=None, help="target distance for fixtures")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", default="-", help="CSV path ('-' for stdout)")
    p.add_argument("--omit-runtime", action="store_true", help="leave runtime_ms empty so output is byte-reproducible")
    return p


def _instances(args) -> list[tuple[str, int, int, Instance]]:
    """(map label, agent count, seed/offset, instance) in output order."""
    if args.fixture:
        try:
            inst = fixture(args.fixture, k=args.k, d=args.d)
        except ValueError as e:
            raise InputError(str(e)) from None
        return [(args.fixture, inst.num_agents, 0, inst)]
    label = Path(args.map).name if Path(args.map).exists() else args.map
    try:
        if Path(args.map).exists():
            map_text = Path(args.map).read_text()
            grid = parse_map(map_text)
        else:
            grid = builtin_map(args.map)
            map_text = serialize_map(grid)
    except (OSError, MapFormatError, ValueError) as e:
        raise InputError(f"cannot load map {args.map!r}: {e}") from None
    scen_text = None
    if args.scen:
        try:
            scen_text = Path(args.scen).read_text()
        except OSError as e:
            raise InputError(f"cannot read scenario {args.scen!r}: {e}") from None
    out = []
    for m in args.agents:
        for off in args.offsets:
            try:
                if scen_text is not None:
                    inst = load_instance(map_text, scen_text, m, off, label)
                else:
                    inst = random_instance(grid, m, seed=off, name=label)
            except (MapFormatError, ValueError) as e:
                raise InputError(str(e)) from None
            out.append((label, m, off, inst))
    return out


def _solve_row(job) -> list[str]:
    label, m, seed, inst, cfg_name, time_limit, node_limit, omit_runtime = job
    st = solve(inst, config_from_name(cfg_name), time_limit=time_limit, node_limit=node_limit)

    def pct(cls: SymClass) -> str:
        return f"{st.class_percent(cls):.2f}"

    return [
        label,
        str(m),
        str(seed),
        cfg_name,
        "1" if st.solved else "0",
        str(int(st.cost)) if st.solved else "",
        str(st.expanded),
        str(st.generated),
        "" if omit_runtime else f"{st.runtime * 1000:.1f}",
        pct(SymClass.RECTANGLE),
        pct(SymClass.TARGET),
        pct(SymClass.CORRIDOR),
        pct(SymClass.STANDARD),
    ]


def run_benchmark(args) -> list[list[str]]:
    for c in args.configs:
        config_from_name(c)  # reject unknown names before solving anything
    jobs = [
        (label, m, seed, inst, c, args.time_limit, args.node_limit, args.omit_runtime)
        for label, m, seed, inst in _instances(args)
        for c in args.configs
    ]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            return list(pool.map(_solve_row, jobs))
    return [_solve_row(j) for j in jobs]


def emit_stats_csv(rows: Iterable[Sequence[str]], path: str = "-") -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(COLUMNS)
    w.writerows(rows)
    if path == "-":
        sys.stdout.write(buf.getvalue())
    else:
        with open(path, "w", newline="") as fh:
            fh.write(buf.getvalue())


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        rows = run_benchmark(args)
    except (InputError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    try:
        emit_stats_csv(rows, args.out)
    except OSError as e:
        print(f"error: cannot write {args.out!r}: {e}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
