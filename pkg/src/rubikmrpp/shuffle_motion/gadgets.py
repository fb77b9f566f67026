"""Optimal swap gadgets on fully occupied k x 2 patches (k = 3 or 4).

A patch has ``k`` parallel lines with two positions each; a swap mask picks
the lines whose two robots trade places. Scripts come from breadth-first
search where one step is any collision-free joint move (simultaneous
rotation of disjoint cycles). Local cell ``i * 2 + j`` is line ``i``,
position ``j``.
"""
from __future__ import annotations

from collections import deque
from functools import lru_cache
from importlib import resources
from itertools import product
from typing import Dict, List, Tuple

SHAPES = (3, 4)
TABLE_FILE = "gadgets_v1.txt"
HEADER = "rubikmrpp-gadgets v1"

Move = Tuple[int, ...]  # move[cell] = destination cell


def _neighbors(k: int, p: int) -> List[int]:
    i, j = divmod(p, 2)
    out = [i * 2 + (1 - j)]
    if i > 0:
        out.append((i - 1) * 2 + j)
    if i < k - 1:
        out.append((i + 1) * 2 + j)
    return sorted(out)


def legal_moves(k: int) -> List[Move]:
    """All non-trivial joint moves on a full k x 2 patch, in lexicographic order."""
    n = 2 * k
    options = [[p] + _neighbors(k, p) for p in range(n)]
    moves = []
    for dest in product(*options):
        if len(set(dest)) != n:
            continue
        if any(dest[p] != p and dest[dest[p]] == p for p in range(n)):
            continue
        if all(dest[p] == p for p in range(n)):
            continue
        moves.append(tuple(dest))
    return moves


def _target(k: int, mask: int) -> Tuple[int, ...]:
    occ = list(range(2 * k))
    for i in range(k):
        if mask >> i & 1:
            occ[2 * i], occ[2 * i + 1] = occ[2 * i + 1], occ[2 * i]
    return tuple(occ)


def search_scripts(k: int) -> Dict[int, List[Move]]:
    """Shortest script for every swap mask, by BFS from the identity."""
    moves = legal_moves(k)
    n = 2 * k
    start = tuple(range(n))
    wanted = {_target(k, mask): mask for mask in range(1 << k)}
    parent = {start: None}
    found: Dict[int, List[Move]] = {}
    frontier = deque([start])
    while frontier and len(found) < len(wanted):
        occ = frontier.popleft()
        if occ in wanted and wanted[occ] not in found:
            path = []
            cur = occ
            while parent[cur] is not None:
                prev, mv = parent[cur]
                path.append(mv)
                cur = prev
            found[wanted[occ]] = path[::-1]
        for mv in moves:
            nxt = [0] * n
            for p in range(n):
                nxt[mv[p]] = occ[p]
            nxt = tuple(nxt)
            if nxt not in parent:
                parent[nxt] = (occ, mv)
                frontier.append(nxt)
    assert len(found) == len(wanted), "unreachable gadget target"
    return found


def format_table(tables: Dict[int, Dict[int, List[Move]]]) -> str:
    lines = [HEADER]
    for k in sorted(tables):
        for mask in sorted(tables[k]):
            script = tables[k][mask]
            steps = " ".join("".join(map(str, mv)) for mv in script)
            lines.append(f"{k}x2 {mask} {len(script)} {steps}".rstrip())
    return "\n".join(lines) + "\n"


def parse_table(text: str) -> Dict[int, Dict[int, List[Move]]]:
    rows = text.rstrip("\n").split("\n")
    if rows[0] != HEADER:
        raise ValueError("unknown gadget table version")
    out: Dict[int, Dict[int, List[Move]]] = {}
    for row in rows[1:]:
        parts = row.split()
        k = int(parts[0].split("x")[0])
        mask, length = int(parts[1]), int(parts[2])
        script = [tuple(int(ch) for ch in s) for s in parts[3:]]
        if len(script) != length:
            raise ValueError(f"corrupt gadget row: {row!r}")
        out.setdefault(k, {})[mask] = script
    return out


def compute_gadget_tables() -> Dict[int, Dict[int, List[Move]]]:
    return {k: search_scripts(k) for k in SHAPES}


@lru_cache(maxsize=1)
def gadget_tables() -> Dict[int, Dict[int, List[Move]]]:
    """Persisted table, falling back to a fresh search when the file is absent."""
    try:
        text = resources.files(__package__).joinpath(TABLE_FILE).read_text()
    except FileNotFoundError:
        return compute_gadget_tables()
    return parse_table(text)


def write_table(path) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(format_table(compute_gadget_tables()))
