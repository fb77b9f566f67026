"""Shared plumbing: plan stitching, band rounds and parking-line changes."""
from __future__ import annotations

from typing import Dict, List, Mapping, Optional, Tuple

from ..grid_core import Plan, Pos, makespan
from ..shuffle_motion import (
    MotionScript,
    center_within_cells,
    highway_shuffle,
    linear_merge_shuffle,
)
from .layout import Layout

Cell = Tuple[int, int]


class Timeline:
    """Accumulates synchronized paths for a fixed set of robots."""

    def __init__(self, starts: Mapping[int, Pos]):
        self.cur = dict(starts)
        self.paths: Dict[int, List[Pos]] = {r: [p] for r, p in starts.items()}

    def run(self, script: MotionScript) -> int:
        paths, cur = self.paths, self.cur
        for step in script.steps:
            for r, p in step.items():
                if r in paths:
                    cur[r] = p
            for r, path in paths.items():
                path.append(cur[r])
        return len(script)

    def plan(self) -> Plan:
        return Plan(self.paths)


def plan_script(plan: Plan, reverse: bool = False) -> MotionScript:
    """Steps of ``plan`` up to its makespan, optionally played backwards."""
    T = makespan(plan)
    steps = []
    for k in range(1, T + 1):
        t = T - k if reverse else k
        prev = t + 1 if reverse else t - 1
        steps.append({r: p[t] for r, p in plan.paths.items() if p[t] != p[prev]})
    return MotionScript(steps)


def assign_slots(
    layout: Layout, axis: str, conf: Mapping[int, Pos], target_cell: Mapping[int, Cell]
) -> Dict[int, Pos]:
    """Exact parking slots for robots headed to cells.

    Robots already inside their target cell keep their slot; arrivals take
    the remaining slots in order of current position.
    """
    by_cell: Dict[Cell, List[int]] = {}
    for rid in conf:
        by_cell.setdefault(target_cell[rid], []).append(rid)
    out: Dict[int, Pos] = {}
    for cell, rids in by_cell.items():
        slots = layout.parking(axis, *cell)
        if len(rids) > len(slots) or len(rids) > layout.cap(*cell):
            raise AssertionError(f"cell {cell} receives {len(rids)} robots")
        taken = set()
        arrivals = []
        for rid in rids:
            p = conf[rid]
            if layout.cell_of(p) == cell and p in slots:
                out[rid] = p
                taken.add(p)
            else:
                arrivals.append(rid)
        free = [s for s in slots if s not in taken]
        axial = 1 if axis == "row" else 0
        arrivals.sort(key=lambda r: (conf[r][axial], r))
        for rid, s in zip(arrivals, free):
            out[rid] = s
    return out


def _merge_band(band, conf: Mapping[int, Pos], targets: Mapping[int, Pos], first_virtual: int):
    line1 = band.lines[0]
    occupied = {band.split(p)[1] for p in conf.values()}
    wanted = {band.split(targets[r])[1] for r in conf}
    empty = [a for a in range(band.span[0], band.span[1] + 1) if a not in occupied]
    free = [a for a in range(band.span[0], band.span[1] + 1) if a not in wanted]
    full = dict(conf)
    full_targets = dict(targets)
    vid = first_virtual
    for a, b in zip(empty, free):
        full[vid] = band.pos(line1, a)
        full_targets[vid] = band.pos(line1, b)
        vid -= 1
    return linear_merge_shuffle(band, full, full_targets)


def run_round(
    layout: Layout,
    axis: str,
    conf: Mapping[int, Pos],
    target_cell: Optional[Mapping[int, Cell]] = None,
    exact: Optional[Mapping[int, Pos]] = None,
) -> MotionScript:
    """One shuffle round: every band along ``axis`` in parallel.

    Robots must sit on the round's parking lines. Targets are either cells
    (slots chosen by :func:`assign_slots`) or exact parking slots.
    """
    targets = dict(exact) if exact is not None else assign_slots(layout, axis, conf, target_cell)
    bands: Dict[int, Dict[int, Pos]] = {}
    pick = 0 if axis == "row" else 1
    for rid, p in conf.items():
        bands.setdefault(layout.cell_of(p)[pick], {})[rid] = p
    scripts = []
    for b in sorted(bands):
        members = bands[b]
        band = layout.band(axis, b)
        sub = {r: targets[r] for r in members}
        if all(sub[r] == members[r] for r in members):
            continue
        if len(band.lines) == 3:
            scripts.append(highway_shuffle(band, members, sub))
        else:
            script = _merge_band(band, members, sub, min(min(members), 0) - 1)
            scripts.append(MotionScript([{r: p for r, p in s.items() if r in members} for s in script.steps]))
    return MotionScript.parallel(scripts)


def change_parking(layout: Layout, conf: Mapping[int, Pos], axis: str) -> MotionScript:
    """Move robots from one parking line to the ``axis`` parking line of their cell."""
    ncol = layout.shape[1]
    index = {}
    used = set()
    for p in conf.values():
        i, j = layout.cell_of(p)
        index[p] = i * ncol + j
        used.add((i, j))
    cells: Dict[int, List[Pos]] = {}
    parking: Dict[int, List[Pos]] = {}
    for i, j in used:
        k = i * ncol + j
        cells[k] = layout.cell_cells(i, j)
        parking[k] = layout.parking(axis, i, j)
    return center_within_cells(index, cells, conf, parking)
