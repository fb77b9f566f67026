"""Parallel odd-even transposition sort of every line of a full grid."""
from __future__ import annotations

from typing import Dict, List, Mapping

from ..grid_core import GridMap, Pos
from .gadgets import gadget_tables
from .script import MotionScript


class UnsupportedDimension(ValueError):
    pass


def line_groups(count: int) -> List[int]:
    """Split ``count`` parallel lines into consecutive groups of 3 and 4."""
    fours = {0: 0, 1: 1, 2: 2}[count % 3]
    threes = (count - 4 * fours) // 3
    if count < 3 or threes < 0:
        raise UnsupportedDimension(f"{count} parallel lines cannot be tiled by 3- and 4-line gadgets")
    return [3] * threes + [4] * fours


def odd_even_line_shuffle(
    grid: GridMap, conf: Mapping[int, Pos], targets: Mapping[int, int], axis: str = "row"
) -> MotionScript:
    """Reorder every line by target coordinate using gadget-realized transpositions.

    ``conf`` must occupy every cell. ``targets`` gives each robot its 1-based
    destination coordinate along its line; destinations within a line must be
    distinct. With ``axis="row"`` robots stay in their rows.
    """
    if grid.obstacles:
        raise UnsupportedDimension("odd-even shuffles need an obstacle-free grid")
    if len(conf) != grid.rows * grid.cols:
        raise ValueError("odd-even shuffle requires a fully occupied grid")
    if axis == "row":
        n_lines, L = grid.rows, grid.cols
    else:
        n_lines, L = grid.cols, grid.rows
    groups = line_groups(n_lines)
    tables = gadget_tables()

    def at(line: int, j: int) -> Pos:
        return (line + 1, j + 1) if axis == "row" else (j + 1, line + 1)

    lines: List[List[int]] = [[-1] * L for _ in range(n_lines)]
    for rid, (x, y) in conf.items():
        line, j = (x - 1, y - 1) if axis == "row" else (y - 1, x - 1)
        lines[line][j] = rid
    key: Dict[int, int] = dict(targets)

    def is_sorted() -> bool:
        return all(
            key[ln[j]] < key[ln[j + 1]] for ln in lines for j in range(L - 1)
        )

    steps: List[Dict[int, Pos]] = []
    for rnd in range(L):
        if is_sorted():
            break
        parity = rnd % 2
        gadget_runs = []
        for j in range(parity, L - 1, 2):
            base = 0
            for k in groups:
                mask = 0
                for i in range(k):
                    ln = lines[base + i]
                    if key[ln[j]] > key[ln[j + 1]]:
                        mask |= 1 << i
                if mask:
                    gadget_runs.append((base, k, j, mask))
                base += k
        if not gadget_runs:
            continue
        length = max(len(tables[k][mask]) for _, k, _, mask in gadget_runs)
        block: List[Dict[int, Pos]] = [{} for _ in range(length)]
        for base, k, j, mask in gadget_runs:
            occ = [lines[base + p // 2][j + p % 2] for p in range(2 * k)]
            for t, mv in enumerate(tables[k][mask]):
                nxt = [0] * (2 * k)
                for p in range(2 * k):
                    nxt[mv[p]] = occ[p]
                    if mv[p] != p:
                        q = mv[p]
                        block[t][occ[p]] = at(base + q // 2, j + q % 2)
                occ = nxt
            for i in range(k):
                ln = lines[base + i]
                if mask >> i & 1:
                    ln[j], ln[j + 1] = ln[j + 1], ln[j]
        steps.extend(block)
    if not is_sorted():
        raise AssertionError("odd-even sort did not finish within L rounds")
    return MotionScript(steps)
