"""Synchronized motion scripts.

A script is a list of steps; each step maps the robots that move to their new
cells. Robots absent from a step wait.
"""
from __future__ import annotations

from typing import Dict, Iterable, List, Mapping, Optional

from ..grid_core import GridMap, Pos, Violation, validate_step


class MotionScript:
    __slots__ = ("steps",)

    def __init__(self, steps: Optional[List[Dict[int, Pos]]] = None):
        self.steps = steps if steps is not None else []

    def __len__(self) -> int:
        return len(self.steps)

    def __repr__(self) -> str:
        return f"MotionScript(len={len(self.steps)})"

    def robots(self) -> set:
        out = set()
        for s in self.steps:
            out.update(s)
        return out

    def then(self, other: "MotionScript") -> "MotionScript":
        return MotionScript(self.steps + other.steps)

    def final(self, conf: Mapping[int, Pos]) -> Dict[int, Pos]:
        cur = dict(conf)
        for s in self.steps:
            cur.update(s)
        return cur

    def replay(self, conf: Mapping[int, Pos]) -> List[Dict[int, Pos]]:
        cur = dict(conf)
        out = [dict(cur)]
        for s in self.steps:
            cur.update(s)
            out.append(dict(cur))
        return out

    def validate(self, grid: GridMap, conf: Mapping[int, Pos]) -> Optional[Violation]:
        """First violation when replayed from ``conf`` (other cells empty)."""
        prev = dict(conf)
        for t, s in enumerate(self.steps, 1):
            cur = dict(prev)
            cur.update(s)
            v = validate_step(grid, prev, cur, t)
            if v is not None:
                return v
            prev = cur
        return None

    def compact(self) -> "MotionScript":
        """Drop all-wait steps."""
        return MotionScript([s for s in self.steps if s])

    @staticmethod
    def parallel(scripts: Iterable["MotionScript"]) -> "MotionScript":
        """Step-wise union of scripts over disjoint robot sets."""
        scripts = list(scripts)
        T = max((len(s) for s in scripts), default=0)
        steps: List[Dict[int, Pos]] = [{} for _ in range(T)]
        for sc in scripts:
            for t, s in enumerate(sc.steps):
                steps[t].update(s)
        return MotionScript(steps)
