"""Linear-merge shuffle on a two-line band.

Line 1 is full. A balanced merge sort runs bottom-up; in each merge the left
block's movers drop to line 2, travel right and rise at their final slot,
while the right block's movers slide left along line 1.
"""
from __future__ import annotations

import math
from typing import Dict, List, Mapping, Tuple

from ..grid_core import Pos
from .band import Band
from .script import MotionScript


def merge_bound(L: int) -> int:
    return L + 2 * (math.ceil(math.log2(L)) + 1) if L > 1 else 0


def _tree_levels(L: int) -> List[List[Tuple[int, int, int]]]:
    """Merge nodes ``(lo, mid, hi)`` grouped by depth, deepest first."""
    levels: Dict[int, List[Tuple[int, int, int]]] = {}
    stack = [(0, L, 0)]
    while stack:
        lo, hi, d = stack.pop()
        if hi - lo < 2:
            continue
        mid = lo + (hi - lo) // 2
        levels.setdefault(d, []).append((lo, mid, hi))
        stack.append((lo, mid, d + 1))
        stack.append((mid, hi, d + 1))
    return [sorted(levels[d]) for d in sorted(levels, reverse=True)]


def _merge_phase(band: Band, arr: List[int], key: Mapping[int, int], lo: int, mid: int, hi: int):
    """Steps for one merge; updates ``arr`` in place."""
    line1, line2 = band.lines
    base = band.span[0]
    A, B = arr[lo:mid], arr[mid:hi]
    merged = sorted(A + B, key=lambda r: key[r])
    final = {rid: lo + i for i, rid in enumerate(merged)}
    steps: Dict[int, Dict[int, Pos]] = {}
    nA = len(A)
    for i, rid in enumerate(A):
        f = final[rid]
        b = f - (lo + i)
        if b == 0:
            continue
        steps.setdefault(1, {})[rid] = band.pos(line2, base + lo + i)
        for t in range(2, b + 2):
            steps.setdefault(t, {})[rid] = band.pos(line2, base + lo + i + t - 1)
        up = max(b + 2, nA - i)
        steps.setdefault(up, {})[rid] = band.pos(line1, base + f)
    for j, rid in enumerate(B):
        a = mid + j - final[rid]
        for t in range(1, a + 1):
            steps.setdefault(t, {})[rid] = band.pos(line1, base + mid + j - t)
    arr[lo:hi] = merged
    return steps


def linear_merge_shuffle(band: Band, conf: Mapping[int, Pos], targets: Mapping[int, Pos]) -> MotionScript:
    """Permute the robots filling line 1 of ``band`` into ``targets``.

    Every cell of line 1 must hold a robot and targets must be a permutation
    of those cells.
    """
    if len(band.lines) != 2:
        raise ValueError("linear merge needs a two-line band")
    line1 = band.lines[0]
    L = band.length
    if len(conf) != L:
        raise ValueError(f"linear merge needs exactly {L} robots on line 1, got {len(conf)}")
    arr = [-1] * L
    key: Dict[int, int] = {}
    for rid, p in conf.items():
        line, along = band.split(p)
        if line != line1:
            raise ValueError(f"robot {rid} is not on line 1")
        arr[along - band.span[0]] = rid
        tl, ta = band.split(targets.get(rid, p))
        if tl != line1:
            raise ValueError(f"target of robot {rid} is off line 1")
        key[rid] = ta
    if sorted(key.values()) != list(range(band.span[0], band.span[1] + 1)):
        raise ValueError("targets are not a permutation of line 1")
    out: List[Dict[int, Pos]] = []
    for level in _tree_levels(L):
        phase: Dict[int, Dict[int, Pos]] = {}
        for lo, mid, hi in level:
            if all(key[arr[p]] < key[arr[p + 1]] for p in range(lo, hi - 1)):
                continue
            for t, moves in _merge_phase(band, arr, key, lo, mid, hi).items():
                phase.setdefault(t, {}).update(moves)
        if phase:
            out.extend(phase.get(t, {}) for t in range(1, max(phase) + 1))
    return MotionScript(out)
