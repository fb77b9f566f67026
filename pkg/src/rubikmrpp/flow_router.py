"""Anonymous multi-robot routing by maximum flow over a time-expanded grid.

Layer ``t`` holds an in/out node pair per free cell (unit vertex capacity).
Between layers a robot either waits or crosses an edge gadget: both endpoints
feed one unit-capacity arc per undirected edge, so two robots can never trade
places along an edge while cyclic rotations stay feasible.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, List, Mapping, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import maximum_flow

from .grid_core import GridError, GridMap, Plan, Pos


class RoutingInfeasible(RuntimeError):
    pass


@dataclass
class SinkSpec:
    """Goal slots, each in a group whose total intake is capped."""

    slots: List[Pos]
    groups: List[int]
    capacity: List[int]

    @classmethod
    def cells(cls, goals: Sequence[Pos]) -> "SinkSpec":
        goals = sorted(set(goals))
        return cls(goals, list(range(len(goals))), [1] * len(goals))

    @classmethod
    def grouped(cls, slot_groups: Sequence[Sequence[Pos]], capacity: Sequence[int]) -> "SinkSpec":
        slots, groups = [], []
        for g, members in enumerate(slot_groups):
            for p in members:
                slots.append(p)
                groups.append(g)
        return cls(slots, groups, list(capacity))

    def total(self) -> int:
        per = [0] * len(self.capacity)
        for g in self.groups:
            per[g] += 1
        return sum(min(c, k) for c, k in zip(self.capacity, per))


@dataclass
class RoutingResult:
    plan: Plan
    endpoints: Dict[int, Pos] = field(default_factory=dict)

    @property
    def horizon(self) -> int:
        return self.plan.horizon


class _Layout:
    """Node numbering of the time-expanded graph for a fixed grid."""

    def __init__(self, grid: GridMap):
        self.grid = grid
        self.cells = grid.free_cells()
        self.index = {p: i for i, p in enumerate(self.cells)}
        edges = []
        for p in self.cells:
            for q in ((p[0] + 1, p[1]), (p[0], p[1] + 1)):
                if q in self.index:
                    edges.append((self.index[p], self.index[q]))
        self.edges = np.array(edges, dtype=np.int64).reshape(-1, 2)
        self.C = len(self.cells)
        self.E = len(self.edges)
        self.layer = 2 * self.C + 2 * self.E

    def node_in(self, t, c):
        return t * self.layer + c

    def node_out(self, t, c):
        return t * self.layer + self.C + c

    def build(self, starts: Sequence[int], sinks: SinkSpec, T: int):
        C, E, S = self.C, self.E, self.layer
        cidx = np.arange(C, dtype=np.int64)
        src_rows, dst_rows, caps = [], [], []

        def add(u, v, c=1):
            src_rows.append(np.asarray(u, dtype=np.int64).ravel())
            dst_rows.append(np.asarray(v, dtype=np.int64).ravel())
            caps.append(np.broadcast_to(np.int32(c), np.asarray(u).ravel().shape).astype(np.int32))

        ts = np.arange(T + 1, dtype=np.int64)[:, None]
        add(ts * S + cidx, ts * S + C + cidx)
        if T > 0:
            tm = np.arange(T, dtype=np.int64)[:, None]
            out_t = tm * S + C
            in_n = (tm + 1) * S
            add(out_t + cidx, in_n + cidx)
            if E:
                u, v = self.edges[:, 0], self.edges[:, 1]
                g1 = tm * S + 2 * C + np.arange(E)
                g2 = g1 + E
                add(out_t + u, g1)
                add(out_t + v, g1)
                add(g1, g2)
                add(g2, in_n + u)
                add(g2, in_n + v)
        base = (T + 1) * S
        source, sink = base, base + 1
        group0 = base + 2
        n_nodes = group0 + len(sinks.capacity)
        add([source] * len(starts), [self.node_in(0, c) for c in starts])
        slot_idx = [self.index[p] for p in sinks.slots]
        add([self.node_out(T, c) for c in slot_idx], [group0 + g for g in sinks.groups])
        add([group0 + g for g in range(len(sinks.capacity))], [sink] * len(sinks.capacity), 0)
        caps[-1] = np.asarray(sinks.capacity, dtype=np.int32)
        rows = np.concatenate(src_rows)
        cols = np.concatenate(dst_rows)
        data = np.concatenate(caps)
        mat = coo_matrix((data, (rows, cols)), shape=(n_nodes, n_nodes)).tocsr()
        return mat, source, sink

    def decode(self, flow, starts: Sequence[int], T: int) -> List[List[Pos]]:
        f = flow.tocoo()
        pos = f.data > 0
        succ = {}
        for u, v in zip(f.row[pos].tolist(), f.col[pos].tolist()):
            succ.setdefault(u, []).append(v)
        S, C = self.layer, self.C
        paths = []
        for c in starts:
            path = [self.cells[c]]
            node = self.node_in(0, c)
            for t in range(T):
                node = succ[node][0]  # in -> out
                node = succ[node].pop()
                local = node - (t + 1) * S
                if not 0 <= local < C:  # gadget g1 -> g2 -> next in
                    node = succ[node][0]
                    node = succ[node].pop()
                    local = node - (t + 1) * S
                path.append(self.cells[local])
            paths.append(path)
        return paths


def _sink_distances(grid: GridMap, sinks: SinkSpec) -> Dict[Pos, int]:
    dist = {p: 0 for p in sinks.slots}
    q = deque(sinks.slots)
    while q:
        p = q.popleft()
        for r in grid.neighbors(p):
            if r not in dist:
                dist[r] = dist[p] + 1
                q.append(r)
    return dist


def _feasible(layout: _Layout, starts, sinks, T):
    mat, s, t = layout.build(starts, sinks, T)
    res = maximum_flow(mat, s, t, method="dinic")
    return res.flow_value, res


def min_makespan_unlabeled(
    grid: GridMap,
    starts: Mapping[int, Pos],
    sinks: SinkSpec,
    binary_search: bool = False,
) -> RoutingResult:
    """Minimum-horizon collision-free routing of anonymous robots into ``sinks``."""
    if sinks.total() < len(starts):
        raise RoutingInfeasible("sink capacity below robot count")
    for p in sinks.slots:
        if not grid.is_free(p):
            raise GridError(f"sink slot {p} is not a free cell")
    rids = sorted(starts)
    if not rids:
        return RoutingResult(Plan({}), {})
    layout = _Layout(grid)
    dist = _sink_distances(grid, sinks)
    try:
        lower = max(dist[starts[r]] for r in rids)
    except KeyError as exc:
        raise RoutingInfeasible(f"start {exc.args[0]} cannot reach any sink") from exc
    start_idx = [layout.index[starts[r]] for r in rids]
    n = len(rids)
    cap = grid.rows * grid.cols + n
    if binary_search:
        hi = lower
        while _feasible(layout, start_idx, sinks, hi)[0] < n:
            if hi > cap:
                raise RoutingInfeasible("no routing within the safety horizon")
            hi = max(hi * 2, hi + 1)
        lo = lower
        while lo < hi:
            mid = (lo + hi) // 2
            if _feasible(layout, start_idx, sinks, mid)[0] == n:
                hi = mid
            else:
                lo = mid + 1
        T = lo
        _, res = _feasible(layout, start_idx, sinks, T)
    else:
        T = lower
        while True:
            value, res = _feasible(layout, start_idx, sinks, T)
            if value == n:
                break
            T += 1
            if T > cap:
                raise RoutingInfeasible("no routing within the safety horizon")
    paths = layout.decode(res.flow, start_idx, T)
    plan = Plan({r: p for r, p in zip(rids, paths)})
    return RoutingResult(plan, {r: p[-1] for r, p in zip(rids, paths)})


def cell_partition(grid: GridMap, size: int = 3) -> List[List[Pos]]:
    """Free cells of each ``size x size`` block, row-major; edge blocks may be smaller."""
    blocks = []
    for bx in range(1, grid.rows + 1, size):
        for by in range(1, grid.cols + 1, size):
            blocks.append([
                (x, y)
                for x in range(bx, min(bx + size, grid.rows + 1))
                for y in range(by, min(by + size, grid.cols + 1))
                if (x, y) not in grid.obstacles
            ])
    return blocks


def balanced_targets(
    grid: GridMap, starts: Mapping[int, Pos], capacity: int = 3, size: int = 3
) -> RoutingResult:
    """Route robots so that no ``size x size`` block holds more than ``capacity``."""
    blocks = [b for b in cell_partition(grid, size) if b]
    if capacity * len(blocks) < len(starts):
        raise RoutingInfeasible("not enough block capacity for the robots")
    return min_makespan_unlabeled(grid, starts, SinkSpec.grouped(blocks, [capacity] * len(blocks)))


def dump_time_expanded(grid: GridMap, starts: Mapping[int, Pos], sinks: SinkSpec, T: int) -> str:
    """Text listing of the graph: one ``u v capacity`` arc per line with node legend."""
    layout = _Layout(grid)
    mat, s, t = layout.build([layout.index[starts[r]] for r in sorted(starts)], sinks, T)
    S, C, E = layout.layer, layout.C, layout.E

    def name(v):
        if v == s:
            return "source"
        if v == t:
            return "sink"
        if v >= (T + 1) * S:
            return f"group{v - (T + 1) * S - 2}"
        layer, local = divmod(v, S)
        if local < C:
            return f"in{layer}{layout.cells[local]}"
        if local < 2 * C:
            return f"out{layer}{layout.cells[local - C]}"
        e = (local - 2 * C) % E
        u, w = layout.edges[e]
        tag = "g1" if local < 2 * C + E else "g2"
        return f"{tag}{layer}{layout.cells[u]}-{layout.cells[w]}"

    coo = mat.tocoo()
    order = np.lexsort((coo.col, coo.row))
    lines = [f"# horizon {T}, {mat.shape[0]} nodes, {len(order)} arcs"]
    for k in order:
        lines.append(f"{name(coo.row[k])} {name(coo.col[k])} {coo.data[k]}")
    return "\n".join(lines) + "\n"


def brute_force_unlabeled_optimal(grid: GridMap, starts: Sequence[Pos], goals: Sequence[Pos]) -> int:
    """Exact optimal makespan by joint-state BFS; robots anonymous."""
    if grid.rows * grid.cols > 12 or len(starts) > 4:
        raise ValueError("brute force limited to 12 cells and 4 robots")
    if len(starts) != len(goals):
        raise ValueError("starts and goals differ in size")
    start = tuple(sorted(starts))
    goal = tuple(sorted(goals))
    opts = {p: [p] + list(grid.neighbors(p)) for p in grid.free_cells()}
    dist = {start: 0}
    q = deque([start])
    while q:
        st = q.popleft()
        if st == goal:
            return dist[st]
        where = {p: i for i, p in enumerate(st)}
        for nxt in product(*(opts[p] for p in st)):
            if len(set(nxt)) != len(nxt):
                continue
            if any(
                nxt[i] != st[i] and nxt[i] in where and nxt[where[nxt[i]]] == st[i]
                for i in range(len(st))
            ):
                continue
            key = tuple(sorted(nxt))
            if key not in dist:
                dist[key] = dist[st] + 1
                q.append(key)
    raise RoutingInfeasible("goal configuration unreachable")
