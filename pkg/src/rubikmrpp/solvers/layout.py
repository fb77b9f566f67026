"""Partition of a grid into bands and cells for the highway/merge solvers.

Row bands are 3 or 2 rows tall and column bands 3 or 2 columns wide. A
3-line band moves robots with highway shuffles along its middle line; a
2-line band uses linear merges on its first line. Each cell (row band x
column band) holds at most ``cap`` robots, and capacities must factor as
``row_factor * col_factor`` so the abstract table stays regular.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Tuple

from ..grid_core import GridError, GridMap, Pos
from ..shuffle_motion import Band


def split_lengths(m: int, prefer: int = 3) -> List[int]:
    """Band lengths summing to ``m``: 3s with one or two trailing 2s if needed."""
    if prefer == 2:
        if m % 2:
            raise GridError(f"dimension {m} is not even")
        return [2] * (m // 2)
    twos = {0: 0, 1: 2, 2: 1}[m % 3]
    if m < 2 * twos or m < 2:
        raise GridError(f"dimension {m} cannot be split into bands")
    return [3] * ((m - 2 * twos) // 3) + [2] * twos


def sorting_obstacles(rows: int, cols: int) -> frozenset:
    return frozenset((3 * a + 2, 3 * b + 2) for a in range(rows // 3) for b in range(cols // 3))


def _starts(lengths: List[int]) -> List[int]:
    out, acc = [], 1
    for h in lengths:
        out.append(acc)
        acc += h
    return out


@dataclass
class Layout:
    grid: GridMap
    heights: List[int]
    widths: List[int]
    obstacle_mode: bool = False
    row_starts: List[int] = field(init=False)
    col_starts: List[int] = field(init=False)
    row_factors: Tuple[int, ...] = field(init=False)
    col_factors: Tuple[int, ...] = field(init=False)

    def __post_init__(self) -> None:
        self.row_starts = _starts(self.heights)
        self.col_starts = _starts(self.widths)
        if self.obstacle_mode:
            self.row_factors = (1,) * len(self.heights)
            self.col_factors = (2,) * len(self.widths)
        elif len(set(self.heights)) == 1:
            h = self.heights[0]
            self.row_factors = (1,) * len(self.heights)
            self.col_factors = tuple(min(h, w) for w in self.widths)
        elif len(set(self.widths)) == 1:
            w = self.widths[0]
            self.row_factors = tuple(min(h, w) for h in self.heights)
            self.col_factors = (1,) * len(self.widths)
        else:
            raise GridError(
                f"{self.grid.rows}x{self.grid.cols} needs mixed band sizes on both axes; unsupported"
            )
        self._row_band = {}
        for i, (x0, h) in enumerate(zip(self.row_starts, self.heights)):
            for x in range(x0, x0 + h):
                self._row_band[x] = i
        self._col_band = {}
        for j, (y0, w) in enumerate(zip(self.col_starts, self.widths)):
            for y in range(y0, y0 + w):
                self._col_band[y] = j
        self._row_park = {}
        self._col_park = {}
        self._cells = {}

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.heights), len(self.widths)

    def cap(self, i: int, j: int) -> int:
        return self.row_factors[i] * self.col_factors[j]

    def capacity(self) -> int:
        return sum(self.cap(i, j) for i in range(len(self.heights)) for j in range(len(self.widths)))

    def cell_of(self, p: Pos) -> Tuple[int, int]:
        return self._row_band[p[0]], self._col_band[p[1]]

    def cell_cells(self, i: int, j: int) -> List[Pos]:
        key = (i, j)
        if key not in self._cells:
            x0, y0 = self.row_starts[i], self.col_starts[j]
            self._cells[key] = [
                (x, y)
                for x in range(x0, x0 + self.heights[i])
                for y in range(y0, y0 + self.widths[j])
                if (x, y) not in self.grid.obstacles
            ]
        return self._cells[key]

    def row_park_line(self, i: int) -> int:
        return self.row_starts[i] + (1 if self.heights[i] == 3 else 0)

    def col_park_line(self, j: int) -> int:
        return self.col_starts[j] + (1 if self.widths[j] == 3 else 0)

    def row_parking(self, i: int, j: int) -> List[Pos]:
        key = (i, j)
        if key not in self._row_park:
            x = self.row_park_line(i)
            y0 = self.col_starts[j]
            self._row_park[key] = [
                (x, y) for y in range(y0, y0 + self.widths[j]) if (x, y) not in self.grid.obstacles
            ]
        return self._row_park[key]

    def col_parking(self, i: int, j: int) -> List[Pos]:
        key = (i, j)
        if key not in self._col_park:
            y = self.col_park_line(j)
            x0 = self.row_starts[i]
            self._col_park[key] = [
                (x, y) for x in range(x0, x0 + self.heights[i]) if (x, y) not in self.grid.obstacles
            ]
        return self._col_park[key]

    def parking(self, axis: str, i: int, j: int) -> List[Pos]:
        return self.row_parking(i, j) if axis == "row" else self.col_parking(i, j)

    def band(self, axis: str, index: int) -> Band:
        """Band used by a round that moves robots along ``axis``."""
        if axis == "row":
            x0, h = self.row_starts[index], self.heights[index]
            return Band("row", tuple(range(x0, x0 + h)), (1, self.grid.cols))
        y0, w = self.col_starts[index], self.widths[index]
        return Band("col", tuple(range(y0, y0 + w)), (1, self.grid.rows))

    def center(self, axis: str, index: int) -> float:
        """Middle coordinate of the band ``index`` perpendicular to ``axis``."""
        if axis == "row":
            return self.row_starts[index] + (self.heights[index] - 1) / 2
        return self.col_starts[index] + (self.widths[index] - 1) / 2


def rth_layout(grid: GridMap, obstacle_mode: bool = False) -> Layout:
    if obstacle_mode:
        if grid.rows % 3 or grid.cols % 3:
            raise GridError("obstacle mode needs both dimensions divisible by 3")
        if grid.obstacles != sorting_obstacles(grid.rows, grid.cols):
            raise GridError("obstacle set differs from the (3a+2, 3b+2) pattern")
        return Layout(grid, [3] * (grid.rows // 3), [3] * (grid.cols // 3), obstacle_mode=True)
    if grid.obstacles:
        raise GridError("obstacles are only supported in obstacle mode")
    return Layout(grid, split_lengths(grid.rows), split_lengths(grid.cols))


def rtlm_layout(grid: GridMap) -> Layout:
    if grid.obstacles:
        raise GridError("linear-merge solver does not support obstacles")
    return Layout(grid, split_lengths(grid.rows, 2), split_lengths(grid.cols, 2))
