"""Short within-cell rearrangements (recentering and parking-line changes)."""
from __future__ import annotations

from collections import deque
from functools import lru_cache
from itertools import product
from typing import Dict, FrozenSet, Iterable, List, Mapping, Sequence, Tuple

from ..grid_core import Pos
from .script import MotionScript

MAX_LOCAL_STEPS = 3


@lru_cache(maxsize=None)
def _solve(cells: FrozenSet[Pos], starts: Tuple[Pos, ...], goal: FrozenSet[Pos]) -> Tuple[Tuple[Pos, ...], ...]:
    """Shortest joint-move sequence taking ``starts`` into any placement inside ``goal``."""
    nbrs = {
        p: [p] + [q for q in ((p[0] - 1, p[1]), (p[0], p[1] - 1), (p[0], p[1] + 1), (p[0] + 1, p[1])) if q in cells]
        for p in cells
    }
    parent = {starts: None}
    frontier = deque([starts])
    while frontier:
        state = frontier.popleft()
        if all(p in goal for p in state):
            path = []
            while parent[state] is not None:
                path.append(state)
                state = parent[state]
            return tuple(reversed(path))
        before = {p: i for i, p in enumerate(state)}
        for nxt in product(*(nbrs[p] for p in state)):
            if len(set(nxt)) != len(nxt) or nxt in parent:
                continue
            if any(
                nxt[i] != state[i] and before.get(nxt[i]) is not None and nxt[before[nxt[i]]] == state[i]
                for i in range(len(state))
            ):
                continue
            parent[nxt] = state
            frontier.append(nxt)
    raise ValueError("cell rearrangement has no solution")


def rearrange_cell(
    cells: Iterable[Pos], conf: Mapping[int, Pos], goal: Iterable[Pos]
) -> MotionScript:
    """Move the robots of one cell onto ``goal`` cells (any assignment).

    Coordinates are normalized to the cell's corner so results are shared
    across cells of the same shape.
    """
    cells = list(cells)
    goal = list(goal)
    rids = sorted(conf)
    if len(rids) > len(goal):
        raise ValueError("more robots than goal slots in cell")
    ox = min(p[0] for p in cells)
    oy = min(p[1] for p in cells)
    local = lambda p: (p[0] - ox, p[1] - oy)
    states = _solve(
        frozenset(map(local, cells)),
        tuple(local(conf[r]) for r in rids),
        frozenset(map(local, goal)),
    )
    steps: List[Dict[int, Pos]] = []
    prev = tuple(local(conf[r]) for r in rids)
    for st in states:
        steps.append({r: (p[0] + ox, p[1] + oy) for r, p, q in zip(rids, st, prev) if p != q})
        prev = st
    return MotionScript(steps)


def center_within_cells(
    cell_of: Mapping[Pos, int],
    cell_cells: Sequence[Sequence[Pos]],
    conf: Mapping[int, Pos],
    parking: Sequence[Sequence[Pos]],
) -> MotionScript:
    """Move every robot onto a parking slot of its own cell, all cells in parallel.

    ``cell_of`` maps a grid cell to its partition index; ``cell_cells`` and
    ``parking`` list each partition cell's free grid cells and parking slots.
    """
    groups: Dict[int, Dict[int, Pos]] = {}
    for rid, p in conf.items():
        groups.setdefault(cell_of[p], {})[rid] = p
    scripts = []
    for c, members in groups.items():
        if len(members) > len(parking[c]):
            raise ValueError(f"cell {c} holds {len(members)} robots, capacity {len(parking[c])}")
        if all(p in parking[c] for p in members.values()):
            continue
        scripts.append(rearrange_cell(cell_cells[c], members, parking[c]))
    out = MotionScript.parallel(scripts)
    if len(out) > MAX_LOCAL_STEPS:
        raise AssertionError(f"recentering took {len(out)} steps")
    return out
