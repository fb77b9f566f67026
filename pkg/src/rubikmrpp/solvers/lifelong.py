"""Lifelong operation in batches: every robot gets a fresh goal per batch."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from ..grid_core import GridMap, Instance
from .config import SolverConfig
from .rth import solve_rth


@dataclass
class LifelongStats:
    n: int
    batches: int
    makespans: List[int] = field(default_factory=list)
    goals_reached: int = 0

    @property
    def total_time(self) -> int:
        return sum(self.makespans)

    @property
    def throughput(self) -> Optional[float]:
        return self.goals_reached / self.total_time if self.total_time else None

    def ratio(self, side: int) -> Optional[float]:
        """Throughput relative to ``3n / (2 side)``, the batch upper bound."""
        tp = self.throughput
        return None if tp is None else tp / (3 * self.n / (2 * side))


def lifelong_batch_run(
    grid: GridMap,
    n: int,
    batches: int,
    config: Optional[SolverConfig] = None,
    seed: int = 0,
    identity_goals: bool = False,
) -> LifelongStats:
    config = config or SolverConfig()
    rng = np.random.default_rng(seed)
    cells = grid.free_cells()
    pick = rng.choice(len(cells), n, replace=False)
    starts = {i: cells[k] for i, k in enumerate(pick)}
    stats = LifelongStats(n, batches)
    for _ in range(batches):
        if identity_goals:
            goals = dict(starts)
        else:
            pick = rng.choice(len(cells), n, replace=False)
            goals = {i: cells[k] for i, k in enumerate(pick)}
        bundle = solve_rth(Instance(grid, starts, goals), config)
        stats.makespans.append(bundle.makespan)
        stats.goals_reached += n
        starts = goals
    return stats
