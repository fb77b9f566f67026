"""``rubikmrpp`` command line.

Subcommands: gen, solve, validate, bench, render. Worker count for ``bench``
comes from ``--workers`` or the RUBIKMRPP_WORKERS environment variable.
Exit status is 0 only when every requested run succeeded.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from ..grid_core import GridError, format_instance, format_plan, parse_instance, parse_plan, validate_plan
from ..solvers import SolverError, solve
from .generators import KINDS, GeneratorSpec, generate_instance
from .render import RenderOptions, render_frames, render_svg
from .runner import SOLVER_NAMES, WORKERS_ENV, format_summary, run_benchmark, solver_config, summarize, write_csv


def _size(text: str) -> tuple:
    try:
        r, c = text.lower().split("x")
        return int(r), int(c)
    except ValueError:
        raise argparse.ArgumentTypeError(f"size must look like 30x20, got {text!r}")


def _seeds(text: str) -> List[int]:
    if "-" in text:
        lo, hi = map(int, text.split("-"))
        return list(range(lo, hi + 1))
    return [int(s) for s in text.split(",")]


def _write(path: Optional[str], text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _add_generator_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--kind", choices=KINDS, default="uniform", help="instance pattern (default: uniform)")
    p.add_argument("--n", type=int, help="robot count; overrides --density")
    p.add_argument("--density", type=float, default=1 / 3, help="robots per grid cell (default: 1/3)")
    p.add_argument("--block", type=int, default=3, help="block side for the blocks pattern (default: 3)")


def cmd_gen(args) -> int:
    rows, cols = args.size
    spec = GeneratorSpec(args.kind, rows, cols, args.n, args.density, args.block, args.seed)
    _write(args.output, format_instance(generate_instance(spec)))
    return 0


def cmd_solve(args) -> int:
    instance = parse_instance(Path(args.instance).read_text())
    obstacle_mode = bool(instance.grid.obstacles) and args.solver.startswith("RTH")
    bundle = solve(instance, solver_config(args.solver, obstacle_mode))
    _write(args.output, format_plan(bundle.plan))
    if args.json:
        Path(args.json).write_text(bundle.to_json() + "\n")
    print(f"makespan {bundle.makespan} lower-bound {bundle.stats['lower_bound']} "
          f"ratio {bundle.ratio if bundle.ratio is None else round(bundle.ratio, 4)}", file=sys.stderr)
    return 0


def cmd_validate(args) -> int:
    instance = parse_instance(Path(args.instance).read_text())
    plan = parse_plan(Path(args.plan).read_text(), sorted(instance.starts))
    v = validate_plan(instance, plan)
    print("valid" if v is None else f"invalid: {v}")
    return 0 if v is None else 1


def cmd_bench(args) -> int:
    specs = [GeneratorSpec(args.kind, r, c, args.n, args.density, args.block) for r, c in args.sizes]
    rows = run_benchmark(specs, args.solvers, args.seeds, args.time_limit, args.workers)
    _write(args.output, write_csv(rows, args.deterministic))
    if args.summary:
        print(format_summary(summarize(rows)), file=sys.stderr)
    for r in rows:
        if not r.ok:
            print(f"{r.solver} {r.rows}x{r.cols} seed {r.seed}: {r.status} {r.reason}", file=sys.stderr)
    return 0 if all(r.ok for r in rows) else 1


def cmd_render(args) -> int:
    instance = parse_instance(Path(args.instance).read_text())
    plan = parse_plan(Path(args.plan).read_text(), sorted(instance.starts))
    opts = RenderOptions(cell=args.cell, step_seconds=args.step, partition=args.partition)
    if args.frames:
        out = Path(args.frames)
        out.mkdir(parents=True, exist_ok=True)
        frames = render_frames(plan, instance, opts)
        width = len(str(len(frames) - 1))
        for t, svg in enumerate(frames):
            (out / f"frame_{t:0{width}d}.svg").write_text(svg)
    else:
        _write(args.output, render_svg(plan, instance, opts))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rubikmrpp", description="Grid multi-robot path planning solvers and benchmarks.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate an instance file")
    p.add_argument("size", type=_size, help="ROWSxCOLS")
    _add_generator_args(p)
    p.add_argument("--seed", type=int, default=0, help="RNG seed (default: 0)")
    p.add_argument("-o", "--output", help="instance file (default: stdout)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", help="solve an instance file")
    p.add_argument("instance")
    p.add_argument("--solver", choices=SOLVER_NAMES, default="RTH", help="(default: RTH)")
    p.add_argument("-o", "--output", help="plan file (default: stdout)")
    p.add_argument("--json", help="also write phase breakdown and stats as JSON")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("validate", help="check a plan against an instance")
    p.add_argument("instance")
    p.add_argument("plan")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("bench", help="run a benchmark sweep and write CSV")
    p.add_argument("--sizes", type=_size, nargs="+", default=[(30, 30)], help="ROWSxCOLS list (default: 30x30)")
    _add_generator_args(p)
    p.add_argument("--solvers", nargs="+", choices=SOLVER_NAMES, default=["RTH"], help="(default: RTH)")
    p.add_argument("--seeds", type=_seeds, default=list(range(5)), help="e.g. 0-19 or 1,2,5 (default: 0-4)")
    p.add_argument("--time-limit", type=float, default=300.0, help="seconds per run (default: 300)")
    p.add_argument("--workers", type=int, help=f"worker processes (default: ${WORKERS_ENV} or 1)")
    p.add_argument("--deterministic", action="store_true", help="leave the wall-time column empty")
    p.add_argument("--summary", action="store_true", help="print per-size mean and std to stderr")
    p.add_argument("-o", "--output", help="CSV file (default: stdout)")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("render", help="export a plan as SVG")
    p.add_argument("instance")
    p.add_argument("plan")
    p.add_argument("-o", "--output", help="animated SVG file (default: stdout)")
    p.add_argument("--frames", help="write one SVG per step into this directory instead")
    p.add_argument("--cell", type=int, default=20, help="pixels per cell (default: 20)")
    p.add_argument("--step", type=float, default=0.4, help="seconds per step (default: 0.4)")
    p.add_argument("--partition", type=int, help="draw a heavier grid every K cells")
    p.set_defaults(func=cmd_render)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (GridError, SolverError, OSError) as exc:
        print(f"rubikmrpp: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
