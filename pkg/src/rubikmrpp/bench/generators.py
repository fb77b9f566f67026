"""Random and patterned instances.

All generators are pure functions of their spec, so ``(kind, dims, n, seed)``
reproduces an instance exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np

from ..grid_core import GridError, GridMap, Instance, Pos
from ..solvers.layout import sorting_obstacles

KINDS = ("uniform", "sorting-obstacles", "squares", "blocks")


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    rows: int
    cols: int
    n: Optional[int] = None
    density: Optional[float] = None  # fraction of all grid cells
    block: int = 3
    seed: int = 0

    def robot_count(self) -> int:
        if self.n is not None:
            return self.n
        if self.density is None:
            raise GridError("generator needs either n or density")
        return int(round(self.density * self.rows * self.cols))


def _pick(rng: np.random.Generator, cells: List[Pos], n: int) -> Dict[int, Pos]:
    if n > len(cells):
        raise GridError(f"{n} robots do not fit in {len(cells)} free cells")
    return {i: cells[k] for i, k in enumerate(rng.choice(len(cells), n, replace=False).tolist())}


def ring(side_lo: int, side_hi: int) -> List[Pos]:
    """Clockwise boundary of the square ``[lo, hi]^2`` starting at its top-left corner."""
    lo, hi = side_lo, side_hi
    if lo == hi:
        return [(lo, lo)]
    top = [(lo, y) for y in range(lo, hi)]
    right = [(x, hi) for x in range(lo, hi)]
    bottom = [(hi, y) for y in range(hi, lo, -1)]
    left = [(x, lo) for x in range(hi, lo, -1)]
    return top + right + bottom + left


def _squares(spec: GeneratorSpec, n: int) -> Instance:
    if spec.rows != spec.cols:
        raise GridError("squares pattern needs a square grid")
    side = spec.rows
    starts: Dict[int, Pos] = {}
    # every third cell of each ring, outermost ring first
    for k in range((side + 1) // 2):
        for i, p in enumerate(ring(1 + k, side - k)):
            if len(starts) == n:
                break
            if i % 3 == 0:
                starts[len(starts)] = p
    if len(starts) < n:
        raise GridError(f"squares pattern holds at most {len(starts)} robots on a {side}x{side} grid")
    goals = {rid: (side + 1 - x, side + 1 - y) for rid, (x, y) in starts.items()}
    return Instance(GridMap(side, side), starts, goals)


def _blocks(spec: GeneratorSpec, n: int, rng: np.random.Generator) -> Instance:
    b = spec.block
    if b < 1 or spec.rows % b or spec.cols % b:
        raise GridError(f"grid {spec.rows}x{spec.cols} is not tiled by {b}x{b} blocks")
    grid = GridMap(spec.rows, spec.cols)
    starts = _pick(rng, grid.free_cells(), n)
    br, bc = spec.rows // b, spec.cols // b
    perm = rng.permutation(br * bc).tolist()
    goals = {}
    for rid, (x, y) in starts.items():
        src = ((x - 1) // b) * bc + (y - 1) // b
        ti, tj = divmod(perm[src], bc)
        goals[rid] = (ti * b + (x - 1) % b + 1, tj * b + (y - 1) % b + 1)
    return Instance(grid, starts, goals)


def generate_instance(spec: GeneratorSpec) -> Instance:
    if spec.kind not in KINDS:
        raise GridError(f"unknown generator kind {spec.kind!r}")
    n = spec.robot_count()
    rng = np.random.default_rng(spec.seed)
    if spec.kind == "squares":
        return _squares(spec, n)
    if spec.kind == "blocks":
        return _blocks(spec, n, rng)
    obstacles = frozenset()
    if spec.kind == "sorting-obstacles":
        if spec.rows % 3 or spec.cols % 3:
            raise GridError("sorting-obstacles grids need both dimensions divisible by 3")
        obstacles = sorting_obstacles(spec.rows, spec.cols)
    grid = GridMap(spec.rows, spec.cols, obstacles)
    cells = grid.free_cells()
    return Instance(grid, _pick(rng, cells, n), _pick(rng, cells, n))
