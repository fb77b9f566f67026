from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional

from ..grid_core import Plan

ALGORITHMS = ("RTM", "RTH", "RTLM")
MATCHINGS = ("plain", "lba", "ip-export")
PHASES = ("anon_in", "round1", "round2", "round3", "anon_out")


class SolverError(ValueError):
    """Instance outside a solver's supported envelope."""


class SolverTimeout(RuntimeError):
    pass


@dataclass(frozen=True)
class SolverConfig:
    algorithm: str = "RTH"
    orientation: Optional[str] = None  # RCR, CRC, or None for the cheaper one
    matching: str = "plain"
    obstacle_mode: bool = False
    seed: int = 0
    lam: float = 0.0
    deadline: Optional[float] = None  # time.monotonic() value
    ip_export_path: Optional[str] = None
    compact: bool = True

    def __post_init__(self) -> None:
        if self.algorithm not in ALGORITHMS:
            raise SolverError(f"unknown algorithm {self.algorithm!r}")
        if self.matching not in MATCHINGS:
            raise SolverError(f"unknown matching mode {self.matching!r}")
        if self.orientation not in (None, "RCR", "CRC"):
            raise SolverError(f"unknown orientation {self.orientation!r}")
        if self.obstacle_mode and self.algorithm != "RTH":
            raise SolverError("obstacle mode is only available for RTH")

    def check_deadline(self) -> None:
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise SolverTimeout("time limit reached")

    def label(self) -> str:
        name = self.algorithm
        if self.orientation == "CRC":
            name += "-LL"
        if self.matching == "lba":
            name += "-LBA"
        return name


@dataclass
class SolutionBundle:
    plan: Plan
    phases: Dict[str, int] = field(default_factory=dict)
    stats: Dict[str, object] = field(default_factory=dict)
    artifacts: Dict[str, str] = field(default_factory=dict)

    @property
    def makespan(self) -> int:
        return int(self.stats.get("makespan", 0))

    @property
    def ratio(self) -> Optional[float]:
        r = self.stats.get("ratio")
        return None if r is None else float(r)

    def to_json(self) -> str:
        stats = {k: (float(v) if isinstance(v, Fraction) else v) for k, v in self.stats.items()}
        return json.dumps({"phases": self.phases, "stats": stats}, sort_keys=True)
