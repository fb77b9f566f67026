"""Benchmark sweeps: generate, solve, validate, score, tabulate.

Validation always precedes scoring, so an invalid plan never gets a ratio.
Failures become rows with a status and a reason; the sweep itself never raises.
"""
from __future__ import annotations

import csv
import io
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from itertools import product
from statistics import mean, pstdev
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from ..grid_core import GridError, Instance, makespan, manhattan_lower_bound, validate_plan
from ..solvers import PHASES, SolverConfig, SolverError, SolverTimeout, solve
from .generators import GeneratorSpec, generate_instance

WORKERS_ENV = "RUBIKMRPP_WORKERS"
SOLVER_NAMES = ("RTM", "RTH", "RTH-LL", "RTH-LBA", "RTH-LL-LBA", "RTLM")


@dataclass
class BenchmarkRow:
    kind: str
    rows: int
    cols: int
    n: int
    seed: int
    solver: str
    status: str
    makespan: Optional[int] = None
    lower_bound: Optional[int] = None
    ratio: Optional[float] = None
    anon_in: Optional[int] = None
    round1: Optional[int] = None
    round2: Optional[int] = None
    round3: Optional[int] = None
    anon_out: Optional[int] = None
    wall_time: Optional[float] = None
    reason: str = ""

    @property
    def ok(self) -> bool:
        return self.status == "ok"


CSV_COLUMNS = tuple(f.name for f in fields(BenchmarkRow))
_INTS = {"rows", "cols", "n", "seed", "makespan", "lower_bound", *PHASES}
_FLOATS = {"ratio", "wall_time"}


def solver_config(name: str, obstacle_mode: bool = False, deadline: Optional[float] = None) -> SolverConfig:
    """Map a solver label such as ``RTH-LL-LBA`` to a config.

    Plain ``RTH`` picks the cheaper orientation; ``RTLM`` always uses
    bottleneck matchings, as its direct entry point does.
    """
    if name not in SOLVER_NAMES:
        raise SolverError(f"unknown solver {name!r}; choose from {', '.join(SOLVER_NAMES)}")
    parts = name.split("-")
    return SolverConfig(
        algorithm=parts[0],
        orientation="CRC" if "LL" in parts else None,
        matching="lba" if "LBA" in parts or parts[0] == "RTLM" else "plain",
        obstacle_mode=obstacle_mode and parts[0] == "RTH",
        deadline=deadline,
    )


def run_one(spec: GeneratorSpec, solver: str, time_limit: Optional[float] = None) -> BenchmarkRow:
    row = BenchmarkRow(spec.kind, spec.rows, spec.cols, spec.robot_count(), spec.seed, solver, "ok")
    t0 = time.perf_counter()
    try:
        instance = generate_instance(spec)
        deadline = None if time_limit is None else time.monotonic() + time_limit
        config = solver_config(solver, spec.kind == "sorting-obstacles", deadline)
        bundle = solve(instance, config)
    except SolverTimeout as exc:
        row.status, row.reason = "timeout", str(exc)
    except (SolverError, GridError) as exc:
        row.status, row.reason = "unsupported", str(exc)
    except Exception as exc:  # recorded, never fatal
        row.status, row.reason = "error", f"{type(exc).__name__}: {exc}"
    else:
        score(row, instance, bundle)
    row.wall_time = time.perf_counter() - t0
    return row


def score(row: BenchmarkRow, instance: Instance, bundle) -> None:
    violation = validate_plan(instance, bundle.plan)
    if violation is not None:
        row.status, row.reason = "invalid", str(violation)
        return
    row.makespan = makespan(bundle.plan)
    row.lower_bound = manhattan_lower_bound(instance)
    if row.lower_bound:
        row.ratio = row.makespan / row.lower_bound
    for ph in PHASES:
        setattr(row, ph, bundle.phases.get(ph))


def _run_star(args: Tuple[GeneratorSpec, str, Optional[float]]) -> BenchmarkRow:
    return run_one(*args)


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def run_benchmark(
    specs: Iterable[GeneratorSpec],
    solvers: Sequence[str],
    seeds: Sequence[int],
    time_limit: Optional[float] = 300.0,
    workers: Optional[int] = None,
) -> List[BenchmarkRow]:
    """One row per (spec, solver, seed), in that nesting order.

    Each row regenerates its instance from its generator spec and seed, so rows share
    nothing and paired solvers see the same instance.
    """
    jobs = [
        (GeneratorSpec(s.kind, s.rows, s.cols, s.n, s.density, s.block, seed), solver, time_limit)
        for s, solver, seed in product(specs, solvers, seeds)
    ]
    workers = workers or worker_count()
    if workers == 1 or len(jobs) < 2:
        return [_run_star(j) for j in jobs]
    with ProcessPoolExecutor(workers) as pool:
        return list(pool.map(_run_star, jobs))


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(rows: Iterable[BenchmarkRow], deterministic: bool = False) -> str:
    """CSV text; ``deterministic`` blanks the wall-clock column."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for row in rows:
        d = asdict(row)
        if deterministic:
            d["wall_time"] = None
        w.writerow(_cell(d[c]) for c in CSV_COLUMNS)
    return buf.getvalue()


def parse_csv(text: str) -> List[BenchmarkRow]:
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
        raise ValueError("unexpected CSV header")
    out = []
    for rec in reader:
        kw: Dict[str, object] = {}
        for k, v in rec.items():
            if k in _INTS:
                kw[k] = int(v) if v != "" else None
            elif k in _FLOATS:
                kw[k] = float(v) if v != "" else None
            else:
                kw[k] = v
        out.append(BenchmarkRow(**kw))
    return out


def summarize(rows: Iterable[BenchmarkRow]) -> List[Dict[str, object]]:
    """Per (kind, size, n, solver) mean and population std of makespan and ratio."""
    groups: Dict[tuple, List[BenchmarkRow]] = {}
    for r in rows:
        groups.setdefault((r.kind, r.rows, r.cols, r.n, r.solver), []).append(r)
    table = []
    for (kind, rows_, cols, n, solver), rs in groups.items():
        good = [r for r in rs if r.ok]
        ratios = [r.ratio for r in good if r.ratio is not None]
        spans = [r.makespan for r in good]
        table.append({
            "kind": kind, "rows": rows_, "cols": cols, "n": n, "solver": solver,
            "runs": len(rs), "ok": len(good),
            "makespan_mean": mean(spans) if spans else None,
            "makespan_std": pstdev(spans) if spans else None,
            "ratio_mean": mean(ratios) if ratios else None,
            "ratio_std": pstdev(ratios) if ratios else None,
        })
    return table


def format_summary(table: List[Dict[str, object]]) -> str:
    lines = [f"{'kind':<18}{'size':>9}{'n':>7} {'solver':<12}{'ok':>6}{'ratio':>9}{'±':>8}{'makespan':>10}"]
    for t in table:
        size = f"{t['rows']}x{t['cols']}"
        rm = "-" if t["ratio_mean"] is None else f"{t['ratio_mean']:.3f}"
        rs = "-" if t["ratio_std"] is None else f"{t['ratio_std']:.3f}"
        ms = "-" if t["makespan_mean"] is None else f"{t['makespan_mean']:.1f}"
        lines.append(
            f"{t['kind']:<18}{size:>9}{t['n']:>7} {t['solver']:<12}{t['ok']:>3}/{t['runs']:<2}{rm:>9}{rs:>8}{ms:>10}"
        )
    return "\n".join(lines)
