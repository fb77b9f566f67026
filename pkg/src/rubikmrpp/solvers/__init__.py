"""End-to-end solvers."""
from typing import Optional

from ..grid_core import Instance
from .compact import compact_plan
from .config import PHASES, SolutionBundle, SolverConfig, SolverError, SolverTimeout
from .layout import Layout, rth_layout, rtlm_layout, sorting_obstacles, split_lengths
from .lifelong import LifelongStats, lifelong_batch_run
from .rth import solve_rth, solve_rtlm
from .rtm import rtm_bound, solve_rtm


def solve(instance: Instance, config: Optional[SolverConfig] = None) -> SolutionBundle:
    config = config or SolverConfig()
    if config.algorithm == "RTM":
        return solve_rtm(instance, config)
    return solve_rth(instance, config)


__all__ = [
    "PHASES",
    "Layout",
    "LifelongStats",
    "SolutionBundle",
    "SolverConfig",
    "SolverError",
    "SolverTimeout",
    "compact_plan",
    "lifelong_batch_run",
    "rth_layout",
    "rtlm_layout",
    "rtm_bound",
    "solve",
    "solve_rth",
    "solve_rtlm",
    "solve_rtm",
    "sorting_obstacles",
    "split_lengths",
]
