"""Rubik-Table multi-robot path planning on 4-connected grids."""
from .grid_core import (
    GridError,
    GridMap,
    Instance,
    Plan,
    Violation,
    makespan,
    manhattan_lower_bound,
    optimality_ratio,
    validate_plan,
    validate_step,
)

__version__ = "0.1.0"

__all__ = [
    "GridError",
    "GridMap",
    "Instance",
    "Plan",
    "Violation",
    "makespan",
    "manhattan_lower_bound",
    "optimality_ratio",
    "validate_plan",
    "validate_step",
]
