"""Highway (RTH) and linear-merge (RTLM) pipelines.

1. route starts anonymously onto the first round's parking slots;
2. route goals the same way; the reversed paths form the plan's tail and
   fix each robot's parking target;
3. three band rounds driven by the Rubik Table plan, with parking-line
   changes in between.
"""
from __future__ import annotations

import time
from fractions import Fraction
from typing import Dict, Optional

from ..flow_router import SinkSpec, min_makespan_unlabeled
from ..grid_core import GridError, Instance, Plan, makespan, manhattan_lower_bound
from ..matching_opt import Projection, build_ip_model, export_lp, lba_matchings
from ..rubik_table import AbstractTable, Item, cross_slots, pad_with_virtual, plan_labeled
from .config import PHASES, SolutionBundle, SolverConfig, SolverError
from .layout import Layout, rth_layout, rtlm_layout
from .compact import compact_plan
from .pipeline import Timeline, change_parking, plan_script, run_round


def default_orientation(instance: Instance) -> str:
    return "RCR" if instance.grid.rows >= instance.grid.cols else "CRC"


def finish_bundle(
    instance: Instance, plan: Plan, phases: Dict[str, int], t0: float, compact: bool = True, **extra
) -> SolutionBundle:
    raw = makespan(plan)
    if compact and raw:
        plan = compact_plan(plan)
    ms = makespan(plan)
    lb = manhattan_lower_bound(instance)
    stats = {
        "n": instance.n,
        "rows": instance.grid.rows,
        "cols": instance.grid.cols,
        "makespan": ms,
        "makespan_raw": raw,
        "lower_bound": lb,
        "ratio": Fraction(ms, lb) if lb else None,
        "wall_time": time.perf_counter() - t0,
    }
    stats.update(extra)
    return SolutionBundle(plan, phases, stats)


def make_layout(instance: Instance, config: SolverConfig) -> Layout:
    grid = instance.grid
    try:
        if config.algorithm == "RTLM":
            layout = rtlm_layout(grid)
        else:
            layout = rth_layout(grid, config.obstacle_mode)
    except GridError as exc:
        raise SolverError(str(exc)) from exc
    if instance.n > layout.capacity():
        raise SolverError(f"{instance.n} robots exceed the {layout.capacity()} parking slots")
    return layout


def solve_rth(instance: Instance, config: Optional[SolverConfig] = None) -> SolutionBundle:
    config = config or SolverConfig()
    t0 = time.perf_counter()
    if not instance.labeled:
        raise SolverError("solver needs a labeled instance")
    layout = make_layout(instance, config)
    orientation = config.orientation or default_orientation(instance)
    empty_phases = {k: 0 for k in PHASES}
    if instance.is_identity():
        plan = Plan({r: [p] for r, p in instance.starts.items()})
        return finish_bundle(instance, plan, empty_phases, t0, label=config.label(), orientation=orientation)

    first, second = ("row", "col") if orientation == "RCR" else ("col", "row")
    nr, nc = layout.shape
    cells = [(i, j) for i in range(nr) for j in range(nc)]
    sinks = SinkSpec.grouped([layout.parking(first, i, j) for i, j in cells], [layout.cap(i, j) for i, j in cells])
    grid = instance.grid

    routed_in = min_makespan_unlabeled(grid, instance.starts, sinks)
    config.check_deadline()
    routed_out = min_makespan_unlabeled(grid, instance.goals, sinks)
    config.check_deadline()
    cs, cg = routed_in.endpoints, routed_out.endpoints

    table = AbstractTable(nr, nc, row_factors=layout.row_factors, col_factors=layout.col_factors)
    for rid in sorted(instance.starts):
        table.place(Item(rid, goal=layout.cell_of(cg[rid])), layout.cell_of(cs[rid]))
    pad_with_virtual(table, max(instance.starts) + 1)

    extra = {"label": config.label(), "orientation": orientation}
    matchings = None
    if config.matching != "plain":
        axial = 1 if first == "row" else 0
        cross_axis = "col" if first == "row" else "row"
        proj = Projection(
            table,
            orientation,
            {r: cs[r][axial] for r in cs},
            {r: cg[r][axial] for r in cg},
            [layout.center(cross_axis, k) for k in cross_slots(table, orientation)],
        )
        if config.matching == "lba":
            res = lba_matchings(proj, config.lam)
            matchings = res.matchings
            extra.update(bottleneck=res.stage2, lba_fallback=res.fallback)
        else:
            text = export_lp(build_ip_model(proj))
            if config.ip_export_path:
                with open(config.ip_export_path, "w") as fh:
                    fh.write(text)
            extra["ip_model"] = text
    shuffle = plan_labeled(table, orientation, matchings)
    config.check_deadline()

    timeline = Timeline(instance.starts)
    phases = dict(empty_phases)
    phases["anon_in"] = timeline.run(plan_script(routed_in.plan))
    conf = dict(cs)
    s1 = run_round(layout, first, conf, target_cell=shuffle.rounds[0].targets)
    conf = s1.final(conf)
    c1 = change_parking(layout, conf, second)
    conf = c1.final(conf)
    s2 = run_round(layout, second, conf, target_cell=shuffle.rounds[1].targets)
    conf = s2.final(conf)
    c2 = change_parking(layout, conf, first)
    conf = c2.final(conf)
    s3 = run_round(layout, first, conf, exact=cg)
    config.check_deadline()
    phases["round1"] = timeline.run(s1)
    phases["round2"] = timeline.run(c1) + timeline.run(s2)
    phases["round3"] = timeline.run(c2) + timeline.run(s3)
    phases["anon_out"] = timeline.run(plan_script(routed_out.plan, reverse=True))
    ip_text = extra.pop("ip_model", None)
    bundle = finish_bundle(instance, timeline.plan(), phases, t0, config.compact, **extra)
    bundle.stats["core"] = phases["round1"] + phases["round2"] + phases["round3"]
    if ip_text is not None:
        bundle.artifacts["ip_model"] = ip_text
    return bundle


def solve_rtlm(instance: Instance, config: Optional[SolverConfig] = None) -> SolutionBundle:
    """Half-density variant; bottleneck matchings are the default here."""
    config = config or SolverConfig(algorithm="RTLM", matching="lba")
    if config.algorithm != "RTLM":
        config = SolverConfig(**{**config.__dict__, "algorithm": "RTLM"})
    return solve_rth(instance, config)
