"""Highway shuffle on a three-line band.

Robots rest on the middle (parking) line. Movers step onto a side lane chosen
by direction, travel without pausing, and step back in at their exact target
slot. Decreasing-coordinate movers use the lower-index lane.
"""
from __future__ import annotations

from typing import Dict, List, Mapping

from ..grid_core import Pos
from .band import Band
from .script import MotionScript


def highway_shuffle(band: Band, conf: Mapping[int, Pos], targets: Mapping[int, Pos]) -> MotionScript:
    """Move every robot of ``conf`` to ``targets[rid]`` on the parking line.

    Robots missing from ``targets`` stay put. Length is ``max |shift| + 2``.
    """
    if len(band.lines) != 3:
        raise ValueError("highway shuffles need a three-line band")
    lo_lane, park, hi_lane = band.lines
    seen = {}
    for rid, p in conf.items():
        line, _ = band.split(p)
        if line != park:
            raise ValueError(f"robot {rid} is not parked on line {park}")
        tgt = targets.get(rid, p)
        if band.split(tgt)[0] != park:
            raise ValueError(f"target of robot {rid} is off the parking line")
        if tgt in seen:
            raise ValueError(f"robots {seen[tgt]} and {rid} share target {tgt}")
        seen[tgt] = rid
    stationary = {conf[rid] for rid in conf if targets.get(rid, conf[rid]) == conf[rid]}
    movers = []
    for rid in sorted(conf):
        src = conf[rid]
        tgt = targets.get(rid, src)
        if tgt == src:
            continue
        if tgt in stationary:
            raise ValueError(f"target {tgt} is held by a stationary robot")
        a, b = band.split(src)[1], band.split(tgt)[1]
        movers.append((rid, a, b))
    if not movers:
        return MotionScript()
    T = max(abs(b - a) for _, a, b in movers) + 2
    steps: List[Dict[int, Pos]] = [{} for _ in range(T)]
    for rid, a, b in movers:
        d = 1 if b > a else -1
        lane = hi_lane if d > 0 else lo_lane
        steps[0][rid] = band.pos(lane, a)
        for t in range(1, abs(b - a) + 1):
            steps[t][rid] = band.pos(lane, a + d * t)
        steps[abs(b - a) + 1][rid] = band.pos(park, b)
    return MotionScript(steps)
