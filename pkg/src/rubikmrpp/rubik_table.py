"""Abstract Rubik Table rearrangement.

A table of ``rows x cols`` cells holds items; a *shuffle* rearranges the items
of one row or one column arbitrarily. Sorting by colour takes a round of row
shuffles followed by a round of column shuffles; a third round places labeled
items at their exact cells.

The intermediate placement comes from splitting the colour/line multigraph
into perfect matchings. Cells may hold several items: cell ``(r, c)`` holds
``row_factors[r] * col_factors[c]`` items, which is reduced to the one-item
case by splitting each line (and each colour) into that many virtual lines
of equal degree.

Table cells are 0-based ``(row, col)`` pairs.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .bipartite import perfect_matching

Cell = Tuple[int, int]

ROW_TARGET = "row-target"
COLUMN_TARGET = "column-target"
RCR = "RCR"
CRC = "CRC"


class TableError(ValueError):
    pass


class MatchingError(RuntimeError):
    """A regular multigraph failed to yield a perfect matching."""


@dataclass(frozen=True)
class Item:
    id: int
    color: Optional[int] = None
    goal: Optional[Cell] = None
    virtual: bool = False


@dataclass
class AbstractTable:
    rows: int
    cols: int
    capacity: int = 1
    row_factors: Optional[Tuple[int, ...]] = None
    col_factors: Optional[Tuple[int, ...]] = None
    cells: Dict[Cell, List[Item]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.row_factors is None and self.col_factors is None:
            self.row_factors = (1,) * self.rows
            self.col_factors = (self.capacity,) * self.cols
        elif self.row_factors is None:
            self.row_factors = (1,) * self.rows
        elif self.col_factors is None:
            self.col_factors = (1,) * self.cols
        self.row_factors = tuple(self.row_factors)
        self.col_factors = tuple(self.col_factors)
        if len(self.row_factors) != self.rows or len(self.col_factors) != self.cols:
            raise TableError("factor vectors do not match table shape")

    def cap(self, cell: Cell) -> int:
        return self.row_factors[cell[0]] * self.col_factors[cell[1]]

    def place(self, item: Item, cell: Cell) -> None:
        r, c = cell
        if not (0 <= r < self.rows and 0 <= c < self.cols):
            raise TableError(f"cell {cell} outside table")
        slot = self.cells.setdefault(cell, [])
        if len(slot) >= self.cap(cell):
            raise TableError(f"cell {cell} over capacity")
        slot.append(item)

    def items(self) -> Iterable[Tuple[Cell, Item]]:
        for cell in sorted(self.cells):
            for item in self.cells[cell]:
                yield cell, item

    def positions(self) -> Dict[int, Cell]:
        return {item.id: cell for cell, item in self.items()}

    def copy_empty(self) -> "AbstractTable":
        return AbstractTable(self.rows, self.cols, self.capacity, self.row_factors, self.col_factors)

    def is_full(self) -> bool:
        return all(
            len(self.cells.get((r, c), ())) == self.cap((r, c))
            for r in range(self.rows)
            for c in range(self.cols)
        )


def pad_with_virtual(table: AbstractTable, first_id: int) -> List[Item]:
    """Fill every cell to capacity with virtual items and return them.

    Labeled tables receive virtual goals on cells whose goal count is below
    capacity; colour-only tables receive colours whose rows are short.
    """
    labeled = any(item.goal is not None for _, item in table.items())
    free_goals: List[Cell] = []
    if labeled:
        used = defaultdict(int)
        for _, item in table.items():
            used[item.goal] += 1
        for r in range(table.rows):
            for c in range(table.cols):
                free_goals.extend([(r, c)] * (table.cap((r, c)) - used[(r, c)]))
    else:
        per_color = defaultdict(int)
        for _, item in table.items():
            per_color[item.color] += 1
        for r in range(table.rows):
            need = sum(table.cap((r, c)) for c in range(table.cols)) - per_color[r]
            free_goals.extend([(r, -1)] * need)
    added: List[Item] = []
    nid = first_id
    it = iter(free_goals)
    for r in range(table.rows):
        for c in range(table.cols):
            cell = (r, c)
            while len(table.cells.get(cell, ())) < table.cap(cell):
                try:
                    g = next(it)
                except StopIteration as exc:
                    raise TableError("goal slots exhausted while padding") from exc
                item = Item(nid, color=g[0], goal=g if labeled else None, virtual=True)
                table.place(item, cell)
                added.append(item)
                nid += 1
    return added


# -- colour multigraph --------------------------------------------------------


@dataclass
class ColorMultigraph:
    """k-regular bipartite multigraph between (virtual) colours and lines.

    ``edges`` holds ``(colour_vertex, line_vertex, item_id)``; the
    ``*_owner`` lists map virtual vertices back to table lines.
    """

    size: int
    degree: int
    edges: List[Tuple[int, int, int]]
    color_owner: List[int] = field(default_factory=list)
    line_owner: List[int] = field(default_factory=list)


@dataclass
class MatchingSet:
    matchings: List[List[Tuple[int, int, int]]]

    def __len__(self) -> int:
        return len(self.matchings)

    def item_slot(self) -> Dict[int, int]:
        return {item: k for k, m in enumerate(self.matchings) for _, _, item in m}


def _normalize(orientation: str) -> str:
    if orientation in (ROW_TARGET, RCR, "row"):
        return ROW_TARGET
    if orientation in (COLUMN_TARGET, CRC, "col", "column"):
        return COLUMN_TARGET
    raise TableError(f"unknown orientation {orientation!r}")


def _axes(table: AbstractTable, orientation: str):
    """(line count, line factors, cross count, cross factors, line/cross index getters)."""
    if _normalize(orientation) == ROW_TARGET:
        return table.rows, table.row_factors, table.cols, table.col_factors, 0, 1
    return table.cols, table.col_factors, table.rows, table.row_factors, 1, 0


def item_color(item: Item, orientation: str) -> int:
    if item.goal is not None:
        return item.goal[0] if _normalize(orientation) == ROW_TARGET else item.goal[1]
    if item.color is None:
        raise TableError(f"item {item.id} has neither goal nor colour")
    return item.color


def cross_slots(table: AbstractTable, orientation: str) -> List[int]:
    """Cross-line index of each matching slot, in slot order."""
    _, _, n_cross, cross_f, _, _ = _axes(table, orientation)
    return [c for c in range(n_cross) for _ in range(cross_f[c])]


def build_color_graph(table: AbstractTable, orientation: str = ROW_TARGET) -> ColorMultigraph:
    n_lines, line_f, n_cross, cross_f, li, ci = _axes(table, orientation)
    k = sum(cross_f)
    by_line: Dict[int, List[Tuple[int, int]]] = defaultdict(list)
    by_color: Dict[int, List[int]] = defaultdict(list)
    for cell, item in table.items():
        color = item_color(item, orientation)
        if not 0 <= color < n_lines:
            raise TableError(f"item {item.id} colour {color} outside 0..{n_lines - 1}")
        by_line[cell[li]].append((cell[ci], item.id))
        by_color[color].append(item.id)
    line_vertex: Dict[int, int] = {}
    color_vertex: Dict[int, int] = {}
    line_owner: List[int] = []
    color_owner: List[int] = []
    for line in range(n_lines):
        members = sorted(by_line[line])
        if len(members) != line_f[line] * k:
            raise TableError(
                f"line {line} holds {len(members)} items, expected {line_f[line] * k}"
            )
        for j, (_, iid) in enumerate(members):
            line_vertex[iid] = len(line_owner) + j // k
        line_owner.extend([line] * line_f[line])
    for color in range(n_lines):
        members = sorted(by_color[color])
        if len(members) != line_f[color] * k:
            raise TableError(
                f"colour {color} has {len(members)} items, expected {line_f[color] * k}"
            )
        for j, iid in enumerate(members):
            color_vertex[iid] = len(color_owner) + j // k
        color_owner.extend([color] * line_f[color])
    edges = [(color_vertex[item.id], line_vertex[item.id], item.id) for _, item in table.items()]
    edges.sort()
    return ColorMultigraph(len(line_owner), k, edges, color_owner, line_owner)


def decompose_matchings(graph: ColorMultigraph) -> MatchingSet:
    """Split a k-regular bipartite multigraph into k perfect matchings."""
    n = graph.size
    bucket: Dict[Tuple[int, int], List[int]] = defaultdict(list)
    for u, v, iid in graph.edges:
        bucket[(u, v)].append(iid)
    for ids in bucket.values():
        ids.sort(reverse=True)
    degree_l = defaultdict(int)
    degree_r = defaultdict(int)
    for u, v, _ in graph.edges:
        degree_l[u] += 1
        degree_r[v] += 1
    if any(degree_l[u] != graph.degree or degree_r[u] != graph.degree for u in range(n)):
        raise MatchingError("graph is not regular")
    out: List[List[Tuple[int, int, int]]] = []
    for _ in range(graph.degree):
        adj: List[List[int]] = [[] for _ in range(n)]
        for (u, v), ids in sorted(bucket.items()):
            if ids:
                adj[u].append(v)
        m = perfect_matching(adj, n)
        if m is None:
            raise MatchingError("no perfect matching in a regular multigraph")
        layer = []
        for u, v in enumerate(m):
            layer.append((u, v, bucket[(u, v)].pop()))
        out.append(layer)
    return MatchingSet(out)


# -- shuffle plans ------------------------------------------------------------


@dataclass
class ShuffleRound:
    axis: str  # "row" or "col"
    targets: Dict[int, Cell]


@dataclass
class ShufflePlan:
    rows: int
    cols: int
    rounds: List[ShuffleRound] = field(default_factory=list)

    @property
    def shuffle_count(self) -> int:
        return sum(self.rows if r.axis == "row" else self.cols for r in self.rounds)

    def line_permutations(self, table: AbstractTable, index: int) -> Dict[int, List[int]]:
        """For one-item cells: ``line -> perm`` with ``perm[old_pos] = new_pos``."""
        src = table
        for r in self.rounds[:index]:
            src = _apply_round(src, r)
        rnd = self.rounds[index]
        size = self.cols if rnd.axis == "row" else self.rows
        lines = self.rows if rnd.axis == "row" else self.cols
        perms = {line: list(range(size)) for line in range(lines)}
        for cell, item in src.items():
            dst = rnd.targets.get(item.id, cell)
            if rnd.axis == "row":
                perms[cell[0]][cell[1]] = dst[1]
            else:
                perms[cell[1]][cell[0]] = dst[0]
        return perms

    def inverse(self, table: AbstractTable) -> "ShufflePlan":
        """Plan undoing this one when applied to ``apply_shuffle_plan(table, self)``."""
        history = [table.positions()]
        cur = table
        for r in self.rounds:
            cur = _apply_round(cur, r)
            history.append(cur.positions())
        rounds = []
        for i in range(len(self.rounds) - 1, -1, -1):
            rounds.append(ShuffleRound(self.rounds[i].axis, dict(history[i])))
        return ShufflePlan(self.rows, self.cols, rounds)

    def to_jsonable(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "rounds": [
                {"axis": r.axis, "targets": {str(k): list(v) for k, v in sorted(r.targets.items())}}
                for r in self.rounds
            ],
        }


def _apply_round(table: AbstractTable, rnd: ShuffleRound) -> AbstractTable:
    out = table.copy_empty()
    for cell, item in table.items():
        dst = rnd.targets.get(item.id, cell)
        fixed = 0 if rnd.axis == "row" else 1
        if dst[fixed] != cell[fixed]:
            raise TableError(f"item {item.id} leaves its {rnd.axis} in a {rnd.axis} round")
        out.place(item, dst)
    return out


def apply_shuffle_plan(table: AbstractTable, plan: ShufflePlan) -> AbstractTable:
    if (plan.rows, plan.cols) != (table.rows, table.cols):
        raise TableError("plan dimensioned for a different table")
    cur = table
    for rnd in plan.rounds:
        cur = _apply_round(cur, rnd)
    return cur


def _intermediate(table: AbstractTable, orientation: str, matchings: Optional[MatchingSet]):
    if matchings is None:
        matchings = decompose_matchings(build_color_graph(table, orientation))
    slots = cross_slots(table, orientation)
    if len(matchings) != len(slots):
        raise TableError("matching count differs from slot count")
    return {iid: slots[k] for iid, k in matchings.item_slot().items()}


def plan_colored(
    table: AbstractTable, orientation: str = ROW_TARGET, matchings: Optional[MatchingSet] = None
) -> ShufflePlan:
    """Two rounds that bring every item onto the line named by its colour."""
    orientation = _normalize(orientation)
    cross = _intermediate(table, orientation, matchings)
    plan = ShufflePlan(table.rows, table.cols)
    r1: Dict[int, Cell] = {}
    r2: Dict[int, Cell] = {}
    for (r, c), item in table.items():
        color = item_color(item, orientation)
        if orientation == ROW_TARGET:
            r1[item.id] = (r, cross[item.id])
            r2[item.id] = (color, cross[item.id])
        else:
            r1[item.id] = (cross[item.id], c)
            r2[item.id] = (cross[item.id], color)
    first, second = ("row", "col") if orientation == ROW_TARGET else ("col", "row")
    plan.rounds = [ShuffleRound(first, r1), ShuffleRound(second, r2)]
    return plan


def plan_labeled(
    table: AbstractTable, orientation: str = RCR, matchings: Optional[MatchingSet] = None
) -> ShufflePlan:
    """Three rounds placing every item on its goal cell (RCR or CRC)."""
    for _, item in table.items():
        if item.goal is None:
            raise TableError(f"item {item.id} is unlabeled")
    plan = plan_colored(table, orientation, matchings)
    third_axis = plan.rounds[0].axis
    plan.rounds.append(ShuffleRound(third_axis, {item.id: item.goal for _, item in table.items()}))
    return plan


def sorted_check(table: AbstractTable, orientation: str = ROW_TARGET) -> bool:
    """True when every item sits on the line named by its colour."""
    li = 0 if _normalize(orientation) == ROW_TARGET else 1
    return all(item_color(item, orientation) == cell[li] for cell, item in table.items())


def table_from_grid(
    rows: int, cols: int, placement: Dict[int, Cell], goals: Dict[int, Cell]
) -> AbstractTable:
    t = AbstractTable(rows, cols)
    for iid in sorted(placement):
        t.place(Item(iid, goal=goals[iid]), placement[iid])
    return t


def line_coordinates(values: Sequence[int]) -> List[int]:
    """Prefix offsets for variable-width lines."""
    out, acc = [], 0
    for v in values:
        out.append(acc)
        acc += v
    return out


def format_table(table: AbstractTable) -> str:
    """``m1 m2 capacity`` header, then ``r c color label`` per item.

    ``color`` is ``-`` when an item carries only a goal; labeled items append
    their goal cell as ``gr gc``. Only uniform-capacity tables are supported.
    """
    if set(table.row_factors) != {1} or len(set(table.col_factors)) != 1:
        raise TableError("text format needs a uniform per-cell capacity")
    lines = [f"{table.rows} {table.cols} {table.col_factors[0]}"]
    for (r, c), item in table.items():
        color = "-" if item.color is None else str(item.color)
        label = f"v{item.id}" if item.virtual else str(item.id)
        goal = "" if item.goal is None else f" {item.goal[0]} {item.goal[1]}"
        lines.append(f"{r} {c} {color} {label}{goal}")
    return "\n".join(lines) + "\n"


def parse_table(text: str) -> AbstractTable:
    rows = text.rstrip("\n").split("\n")
    try:
        m1, m2, capacity = map(int, rows[0].split())
        table = AbstractTable(m1, m2, capacity)
        for row in rows[1:]:
            parts = row.split()
            r, c = int(parts[0]), int(parts[1])
            color = None if parts[2] == "-" else int(parts[2])
            virtual = parts[3].startswith("v")
            iid = int(parts[3].lstrip("v"))
            goal = (int(parts[4]), int(parts[5])) if len(parts) == 6 else None
            table.place(Item(iid, color, goal, virtual), (r, c))
    except (IndexError, ValueError) as exc:
        raise TableError(f"malformed table text: {exc}") from exc
    return table
