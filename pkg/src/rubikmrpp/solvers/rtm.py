"""Full-density solver: Rubik Table rounds realized by gadget odd-even sorts."""
from __future__ import annotations

import time
from typing import Optional

from ..grid_core import Instance, Plan
from ..rubik_table import AbstractTable, Item, pad_with_virtual, plan_labeled
from ..shuffle_motion import UnsupportedDimension, line_groups, odd_even_line_shuffle
from .config import SolutionBundle, SolverConfig, SolverError
from .pipeline import Timeline
from .rth import default_orientation, finish_bundle


def rtm_bound(rows: int, cols: int, orientation: str = "RCR") -> int:
    return 7 * rows + 14 * cols if orientation == "RCR" else 14 * rows + 7 * cols


def solve_rtm(instance: Instance, config: Optional[SolverConfig] = None) -> SolutionBundle:
    config = config or SolverConfig(algorithm="RTM")
    t0 = time.perf_counter()
    grid = instance.grid
    if not instance.labeled:
        raise SolverError("solver needs a labeled instance")
    if grid.obstacles:
        raise SolverError("full-density solver does not support obstacles")
    try:
        line_groups(grid.rows)
        line_groups(grid.cols)
    except UnsupportedDimension as exc:
        raise SolverError(str(exc)) from exc
    orientation = config.orientation or default_orientation(instance)
    phases = {"round1": 0, "round2": 0, "round3": 0}
    if instance.is_identity():
        plan = Plan({r: [p] for r, p in instance.starts.items()})
        return finish_bundle(instance, plan, phases, t0, label=config.label(), orientation=orientation)

    table = AbstractTable(grid.rows, grid.cols)
    for rid in sorted(instance.starts):
        (x, y), (gx, gy) = instance.starts[rid], instance.goals[rid]
        table.place(Item(rid, goal=(gx - 1, gy - 1)), (x - 1, y - 1))
    virtual = pad_with_virtual(table, max(instance.starts) + 1)
    conf = dict(instance.starts)
    where = table.positions()
    for item in virtual:
        r, c = where[item.id]
        conf[item.id] = (r + 1, c + 1)
    shuffle = plan_labeled(table, orientation)
    timeline = Timeline(instance.starts)
    for k, rnd in enumerate(shuffle.rounds, 1):
        axis = rnd.axis
        pick = 1 if axis == "row" else 0
        targets = {rid: cell[pick] + 1 for rid, cell in rnd.targets.items()}
        script = odd_even_line_shuffle(grid, conf, targets, axis)
        conf = script.final(conf)
        phases[f"round{k}"] = timeline.run(script)
        config.check_deadline()
    return finish_bundle(
        instance, timeline.plan(), phases, t0, config.compact, label=config.label(), orientation=orientation
    )
