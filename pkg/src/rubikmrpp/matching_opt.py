"""Cost-aware matching selection for the Rubik Table rounds.

``lba_matchings`` replaces the arbitrary perfect-matching decomposition with
a two-stage bottleneck heuristic; ``build_ip_model`` states the exact
minimax assignment as a 0/1 program that can be exported in LP format and,
for tiny tables, solved by branch and bound.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .bipartite import hopcroft_karp
from .rubik_table import (
    AbstractTable,
    MatchingSet,
    build_color_graph,
    cross_slots,
    decompose_matchings,
    item_color,
    _axes,
)


class AssignmentError(ValueError):
    pass


@dataclass(frozen=True)
class LineCost:
    lam: float = 0.0

    def __call__(self, line: float, start: float, goal: float) -> float:
        if self.lam == 0:
            return abs(line - goal)
        if self.lam == 1:
            return abs(line - start)
        return self.lam * abs(line - start) + (1 - self.lam) * abs(line - goal)


@dataclass
class Projection:
    """A padded abstract table plus physical coordinates along the cross axis.

    ``slot_coord[k]`` is the coordinate of matching slot ``k``; items missing
    from ``start_coord`` (virtual items) cost nothing.
    """

    table: AbstractTable
    orientation: str
    start_coord: Dict[int, float] = field(default_factory=dict)
    goal_coord: Dict[int, float] = field(default_factory=dict)
    slot_coord: List[float] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not self.slot_coord:
            self.slot_coord = [float(c) for c in cross_slots(self.table, self.orientation)]

    def cost(self, lam: float, slot: int, item: int) -> float:
        if item not in self.start_coord:
            return 0
        return LineCost(lam)(self.slot_coord[slot], self.start_coord[item], self.goal_coord[item])


def bottleneck_assignment(weights: Sequence[Sequence[Optional[float]]]) -> Tuple[List[int], float]:
    """Perfect matching minimizing the largest weight; ``None`` marks a missing edge.

    Returns ``(match, bottleneck)`` with ``match[left] = right``.
    """
    n = len(weights)
    if n == 0:
        return [], 0
    values = sorted({w for row in weights for w in row if w is not None})
    order = [
        sorted((j for j in range(n) if row[j] is not None), key=lambda j, row=row: (row[j], j))
        for row in weights
    ]

    def attempt(th):
        adj = [[j for j in order[i] if weights[i][j] <= th] for i in range(n)]
        m = hopcroft_karp(adj, n)
        return None if any(v is None for v in m) else m

    if not values or attempt(values[-1]) is None:
        raise AssignmentError("no perfect matching exists")
    lo, hi = 0, len(values) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if attempt(values[mid]) is not None:
            hi = mid
        else:
            lo = mid + 1
    return attempt(values[lo]), values[lo]


@dataclass
class LBAResult:
    matchings: MatchingSet
    stage1: List[float]
    stage2: float
    fallback: bool = False


def matching_bottleneck(proj: Projection, matchings: MatchingSet, lam: float = 0) -> float:
    """Largest item cost when matching ``k`` is placed at slot ``k``."""
    return max(
        (proj.cost(lam, k, iid) for k, m in enumerate(matchings.matchings) for _, _, iid in m),
        default=0,
    )


def lba_matchings(proj: Projection, lam: float = 0) -> LBAResult:
    graph = build_color_graph(proj.table, proj.orientation)
    n, K = graph.size, graph.degree
    bucket: Dict[Tuple[int, int], List[int]] = {}
    for u, v, iid in graph.edges:
        bucket.setdefault((u, v), []).append(iid)
    chosen: List[List[Tuple[int, int, int]]] = []
    stage1: List[float] = []
    try:
        for k in range(K):
            best: Dict[Tuple[int, int], Tuple[float, int]] = {}
            for uv, ids in bucket.items():
                if ids:
                    best[uv] = min((proj.cost(lam, k, i), i) for i in ids)
            weights = [[best[(u, v)][0] if (u, v) in best else None for v in range(n)] for u in range(n)]
            match, b = bottleneck_assignment(weights)
            layer = []
            for u, v in enumerate(match):
                iid = best[(u, v)][1]
                bucket[(u, v)].remove(iid)
                layer.append((u, v, iid))
            chosen.append(layer)
            stage1.append(b)
    except AssignmentError:
        plain = decompose_matchings(graph)
        return LBAResult(plain, [], matching_bottleneck(proj, plain, lam), fallback=True)
    cost2 = [
        [max((proj.cost(lam, k, iid) for _, _, iid in m), default=0) for k in range(K)]
        for m in chosen
    ]
    assign, b2 = bottleneck_assignment(cost2)
    ordered: List[Optional[List[Tuple[int, int, int]]]] = [None] * K
    for mi, k in enumerate(assign):
        ordered[k] = chosen[mi]
    return LBAResult(MatchingSet(ordered), stage1, b2)  # type: ignore[arg-type]


# -- integer program ----------------------------------------------------------


@dataclass
class Constraint:
    name: str
    coeffs: Dict[str, float]
    sense: str  # "<=", ">=" or "="
    rhs: float


@dataclass
class IPModel:
    objective: Dict[str, float] = field(default_factory=dict)
    constraints: List[Constraint] = field(default_factory=list)
    binaries: List[str] = field(default_factory=list)
    continuous: List[str] = field(default_factory=list)
    # structure for the exact solver; not part of the LP text
    meta: Optional[dict] = field(default=None, compare=False, repr=False)


def _var(k: int, i: int) -> str:
    return f"x_{k}_{i}"


def build_ip_model(proj: Projection) -> IPModel:
    """Minimax slot assignment: minimize ``z0 + z1`` over binaries ``x_k_i``.

    ``z0`` and ``z1`` bound the goal-side and start-side costs of every
    chosen pair. One row per item fixes its slot, one per (slot, colour)
    bounds the colour's multiplicity, one per (line, slot) fixes the line's
    contribution.
    """
    table = proj.table
    if not table.cells:
        return IPModel(meta={"slots": 0, "items": []})
    n_lines, line_f, _, _, li, _ = _axes(table, proj.orientation)
    K = len(proj.slot_coord)
    items = [(cell, it) for cell, it in table.items()]
    model = IPModel(objective={"z0": 1, "z1": 1}, continuous=["z0", "z1"])
    for _, it in items:
        for k in range(K):
            model.binaries.append(_var(k, it.id))
    for _, it in items:
        model.constraints.append(
            Constraint(f"item_{it.id}", {_var(k, it.id): 1 for k in range(K)}, "=", 1)
        )
    for k in range(K):
        for t in range(n_lines):
            members = [it.id for _, it in items if item_color(it, proj.orientation) == t]
            if members:
                model.constraints.append(
                    Constraint(f"color_{k}_{t}", {_var(k, i): 1 for i in members}, "<=", line_f[t])
                )
    for r in range(n_lines):
        members = [it.id for cell, it in items if cell[li] == r]
        for k in range(K):
            if members:
                model.constraints.append(
                    Constraint(f"line_{r}_{k}", {_var(k, i): 1 for i in members}, "=", line_f[r])
                )
    for _, it in items:
        for k in range(K):
            for z, lam in (("z0", 0), ("z1", 1)):
                c = proj.cost(lam, k, it.id)
                if c:
                    model.constraints.append(
                        Constraint(f"{z}_{k}_{it.id}", {z: 1, _var(k, it.id): -c}, ">=", 0)
                    )
    model.meta = {
        "slots": K,
        "items": [it.id for _, it in items],
        "color": {it.id: item_color(it, proj.orientation) for _, it in items},
        "line": {it.id: cell[li] for cell, it in items},
        "factor": list(line_f),
        "c0": {(k, it.id): proj.cost(0, k, it.id) for _, it in items for k in range(K)},
        "c1": {(k, it.id): proj.cost(1, k, it.id) for _, it in items for k in range(K)},
    }
    return model


def _num(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else repr(float(v))


def _expr(coeffs: Mapping[str, float]) -> str:
    parts = []
    for name, c in coeffs.items():
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        term = name if mag == 1 else f"{_num(mag)} {name}"
        parts.append(f"{sign} {term}")
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else text


def export_lp(model: IPModel) -> str:
    """CPLEX-LP text; byte-stable for identical models."""
    out = ["\\ minimax slot assignment", "Minimize"]
    if model.objective:
        out.append(f" obj: {_expr(model.objective)}")
    out.append("Subject To")
    for c in model.constraints:
        out.append(f" {c.name}: {_expr(c.coeffs)} {c.sense} {_num(c.rhs)}")
    out.append("Bounds")
    for v in model.continuous:
        out.append(f" {v} >= 0")
    out.append("Binaries")
    for v in model.binaries:
        out.append(f" {v}")
    out.append("End")
    return "\n".join(out) + "\n"


def _parse_expr(text: str) -> Dict[str, float]:
    tokens = text.split()
    coeffs: Dict[str, float] = {}
    sign, mag = 1.0, None
    for tok in tokens:
        if tok in "+-":
            sign = -1.0 if tok == "-" else 1.0
            continue
        try:
            mag = float(tok)
            continue
        except ValueError:
            pass
        val = sign * (mag if mag is not None else 1.0)
        coeffs[tok] = int(val) if val.is_integer() else val
        sign, mag = 1.0, None
    return coeffs


def parse_lp(text: str) -> IPModel:
    model = IPModel()
    section = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("\\"):
            continue
        if line in ("Minimize", "Subject To", "Bounds", "Binaries", "End"):
            section = line
            continue
        if section == "Minimize":
            model.objective = _parse_expr(line.split(":", 1)[1])
        elif section == "Subject To":
            name, body = line.split(":", 1)
            for sense in ("<=", ">=", "="):
                if f" {sense} " in body:
                    lhs, rhs = body.rsplit(f" {sense} ", 1)
                    break
            else:
                raise ValueError(f"constraint without sense: {line!r}")
            r = float(rhs)
            model.constraints.append(
                Constraint(name.strip(), _parse_expr(lhs), sense, int(r) if r.is_integer() else r)
            )
        elif section == "Bounds":
            model.continuous.append(line.split()[0])
        elif section == "Binaries":
            model.binaries.append(line)
    return model


def ip_objective(model: IPModel, slot_of: Mapping[int, int]) -> float:
    """Minimax objective of an explicit item-to-slot assignment."""
    meta = model.meta
    z0 = max((meta["c0"][(slot_of[i], i)] for i in meta["items"]), default=0)
    z1 = max((meta["c1"][(slot_of[i], i)] for i in meta["items"]), default=0)
    return z0 + z1


def solve_ip_exact_small(model: IPModel, incumbent: Optional[Mapping[int, int]] = None):
    """Exact optimum by branch and bound; at most 8 slots and 24 items.

    Returns ``(slot_of, objective)``.
    """
    meta = model.meta
    if meta is None:
        raise ValueError("model lacks solver structure")
    K, items = meta["slots"], list(meta["items"])
    if K > 8 or len(items) > 24:
        raise ValueError("exact solver limited to 8 slots and 24 items")
    if not items:
        return {}, 0
    c0, c1 = meta["c0"], meta["c1"]
    color, line, factor = meta["color"], meta["line"], meta["factor"]
    items.sort(key=lambda i: -max(c0[(k, i)] + c1[(k, i)] for k in range(K)))
    floor0 = [0.0] * (len(items) + 1)
    floor1 = [0.0] * (len(items) + 1)
    for pos in range(len(items) - 1, -1, -1):
        i = items[pos]
        floor0[pos] = max(floor0[pos + 1], min(c0[(k, i)] for k in range(K)))
        floor1[pos] = max(floor1[pos + 1], min(c1[(k, i)] for k in range(K)))
    best = [math.inf, None]
    if incumbent is not None:
        best = [ip_objective(model, incumbent), dict(incumbent)]
    used_color: Dict[Tuple[int, int], int] = {}
    used_line: Dict[Tuple[int, int], int] = {}
    slot_of: Dict[int, int] = {}

    def dfs(pos, z0, z1):
        if max(z0, floor0[pos]) + max(z1, floor1[pos]) >= best[0]:
            return
        if pos == len(items):
            best[0], best[1] = z0 + z1, dict(slot_of)
            return
        i = items[pos]
        ks = sorted(range(K), key=lambda k: (max(z0, c0[(k, i)]) + max(z1, c1[(k, i)]), k))
        for k in ks:
            kc, kl = (k, color[i]), (line[i], k)
            if used_color.get(kc, 0) >= factor[color[i]] or used_line.get(kl, 0) >= factor[line[i]]:
                continue
            used_color[kc] = used_color.get(kc, 0) + 1
            used_line[kl] = used_line.get(kl, 0) + 1
            slot_of[i] = k
            dfs(pos + 1, max(z0, c0[(k, i)]), max(z1, c1[(k, i)]))
            del slot_of[i]
            used_color[kc] -= 1
            used_line[kl] -= 1

    dfs(0, 0, 0)
    if best[1] is None:
        raise AssignmentError("model has no feasible assignment")
    return best[1], best[0]
