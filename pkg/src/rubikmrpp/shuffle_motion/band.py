from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

from ..grid_core import Pos


@dataclass(frozen=True)
class Band:
    """Consecutive parallel grid lines swept together in one shuffle round.

    ``axis="row"`` means robots travel along rows (changing the column
    coordinate); ``lines`` are the perpendicular coordinates of the band's
    lines in increasing order and ``span`` is the inclusive axial range.
    """

    axis: str
    lines: Tuple[int, ...]
    span: Tuple[int, int]

    @property
    def length(self) -> int:
        return self.span[1] - self.span[0] + 1

    def pos(self, line: int, along: int) -> Pos:
        return (line, along) if self.axis == "row" else (along, line)

    def split(self, p: Pos) -> Tuple[int, int]:
        """(line coordinate, axial coordinate) of a grid cell."""
        return (p[0], p[1]) if self.axis == "row" else (p[1], p[0])
