"""Grid world model, collision rules, plan validation and makespan accounting.

Coordinates are 1-based ``(x, y)`` with ``x`` the row and ``y`` the column.
A robot may move into a cell that another robot vacates in the same step
(following and cyclic rotation are legal); only vertex collisions and edge
swaps are forbidden.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Tuple

Pos = Tuple[int, int]
Configuration = Dict[int, Pos]

VIOLATION_KINDS = (
    "vertex-collision",
    "edge-swap",
    "non-adjacent-move",
    "obstacle-entry",
    "out-of-bounds",
    "wrong-endpoint",
)


class GridError(ValueError):
    """Malformed grid, configuration, instance or plan."""


@dataclass(frozen=True)
class GridMap:
    rows: int
    cols: int
    obstacles: frozenset = frozenset()

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise GridError(f"grid dimensions must be positive, got {self.rows}x{self.cols}")
        obstacles = frozenset(self.obstacles)
        for p in obstacles:
            if not self.in_bounds(p):
                raise GridError(f"obstacle {p} outside {self.rows}x{self.cols} grid")
        object.__setattr__(self, "obstacles", obstacles)

    def in_bounds(self, p: Pos) -> bool:
        return 1 <= p[0] <= self.rows and 1 <= p[1] <= self.cols

    def is_free(self, p: Pos) -> bool:
        return self.in_bounds(p) and p not in self.obstacles

    def neighbors(self, p: Pos) -> Iterator[Pos]:
        x, y = p
        for q in ((x - 1, y), (x, y - 1), (x, y + 1), (x + 1, y)):
            if self.is_free(q):
                yield q

    def free_cells(self) -> List[Pos]:
        return [
            (x, y)
            for x in range(1, self.rows + 1)
            for y in range(1, self.cols + 1)
            if (x, y) not in self.obstacles
        ]


@dataclass(frozen=True)
class Violation:
    """First failure found by :func:`validate_step` or :func:`validate_plan`."""

    kind: str
    time: int
    robots: Tuple[int, ...]

    def __str__(self) -> str:
        ids = ",".join(map(str, self.robots))
        return f"{self.kind} at t={self.time} (robots {ids})"


@dataclass
class Plan:
    """Synchronized paths; every path holds ``horizon + 1`` positions."""

    paths: Dict[int, List[Pos]] = field(default_factory=dict)

    @property
    def horizon(self) -> int:
        if not self.paths:
            return 0
        return len(next(iter(self.paths.values()))) - 1

    def config_at(self, t: int) -> Configuration:
        return {rid: path[t] for rid, path in self.paths.items()}

    def trimmed(self) -> "Plan":
        """Copy with trailing all-wait steps removed."""
        T = makespan(self)
        return Plan({rid: list(path[: T + 1]) for rid, path in self.paths.items()})

    def padded(self, horizon: int) -> "Plan":
        """Copy extended with waits up to ``horizon``."""
        if horizon < self.horizon:
            raise GridError("cannot pad a plan to a shorter horizon")
        extra = horizon - self.horizon
        return Plan({rid: list(path) + [path[-1]] * extra for rid, path in self.paths.items()})

    def without(self, robots: Iterable[int]) -> "Plan":
        drop = set(robots)
        return Plan({rid: path for rid, path in self.paths.items() if rid not in drop})


@dataclass(frozen=True)
class Instance:
    grid: GridMap
    starts: Mapping[int, Pos]
    goals: Mapping[int, Pos]
    labeled: bool = True

    def __post_init__(self) -> None:
        if len(self.starts) != len(self.goals):
            raise GridError("starts and goals differ in size")
        if self.labeled and set(self.starts) != set(self.goals):
            raise GridError("labeled instance needs identical robot ids in starts and goals")
        for name, conf in (("start", self.starts), ("goal", self.goals)):
            v = check_configuration(self.grid, conf)
            if v is not None:
                raise GridError(f"invalid {name} configuration: {v}")

    @property
    def n(self) -> int:
        return len(self.starts)

    def is_identity(self) -> bool:
        if self.labeled:
            return all(self.starts[r] == self.goals[r] for r in self.starts)
        return set(self.starts.values()) == set(self.goals.values())


def check_configuration(grid: GridMap, conf: Mapping[int, Pos], time: int = 0) -> Optional[Violation]:
    """Bounds, obstacle and injectivity checks for a single timestep."""
    seen: Dict[Pos, int] = {}
    found: List[Violation] = []
    for rid in sorted(conf):
        p = conf[rid]
        if not grid.in_bounds(p):
            found.append(Violation("out-of-bounds", time, (rid,)))
        elif p in grid.obstacles:
            found.append(Violation("obstacle-entry", time, (rid,)))
        if p in seen:
            found.append(Violation("vertex-collision", time, (seen[p], rid)))
        else:
            seen[p] = rid
    return min(found, key=lambda v: v.robots) if found else None


def validate_step(
    grid: GridMap, frm: Mapping[int, Pos], to: Mapping[int, Pos], time: int = 1
) -> Optional[Violation]:
    """Check one synchronized transition; ``None`` means the step is legal.

    When several violations exist the one with the lexicographically smallest
    robot tuple is reported, so results are reproducible.
    """
    if set(frm) != set(to):
        raise GridError("step endpoints cover different robot sets")
    found: List[Violation] = []
    occupant: Dict[Pos, int] = {}
    for rid in sorted(to):
        u, v = frm[rid], to[rid]
        if not grid.in_bounds(v):
            found.append(Violation("out-of-bounds", time, (rid,)))
        elif v in grid.obstacles:
            found.append(Violation("obstacle-entry", time, (rid,)))
        elif abs(u[0] - v[0]) + abs(u[1] - v[1]) > 1:
            found.append(Violation("non-adjacent-move", time, (rid,)))
        if v in occupant:
            found.append(Violation("vertex-collision", time, (occupant[v], rid)))
        else:
            occupant[v] = rid
    before = {p: rid for rid, p in frm.items()}
    for rid in sorted(to):
        u, v = frm[rid], to[rid]
        if u == v:
            continue
        other = before.get(v)
        if other is not None and other > rid and to[other] == u:
            found.append(Violation("edge-swap", time, (rid, other)))
    return min(found, key=lambda v: v.robots) if found else None


def validate_plan(instance: Instance, plan: Plan) -> Optional[Violation]:
    """Full plan check: start placement, every step, and goal coverage."""
    if set(plan.paths) != set(instance.starts):
        raise GridError("plan does not cover exactly the instance robots")
    T = plan.horizon
    for rid, path in plan.paths.items():
        if len(path) != T + 1:
            raise GridError(f"robot {rid} path length {len(path)} != horizon + 1")
    grid = instance.grid
    prev = plan.config_at(0)
    v = check_configuration(grid, prev, 0)
    if v is not None:
        return v
    bad = sorted(rid for rid in prev if prev[rid] != instance.starts[rid])
    if bad:
        return Violation("wrong-endpoint", 0, tuple(bad[:1]))
    for t in range(1, T + 1):
        cur = plan.config_at(t)
        v = validate_step(grid, prev, cur, t)
        if v is not None:
            return v
        prev = cur
    if instance.labeled:
        bad = sorted(rid for rid in prev if prev[rid] != instance.goals[rid])
        if bad:
            return Violation("wrong-endpoint", T, tuple(bad[:2]))
    else:
        goal_cells = set(instance.goals.values())
        bad = sorted(rid for rid in prev if prev[rid] not in goal_cells)
        if bad:
            return Violation("wrong-endpoint", T, tuple(bad[:1]))
    return None


def makespan(plan: Plan) -> int:
    """Last timestep at which any robot moves; 0 for an all-wait plan."""
    for t in range(plan.horizon, 0, -1):
        for path in plan.paths.values():
            if path[t] != path[t - 1]:
                return t
    return 0


def manhattan_lower_bound(instance: Instance) -> int:
    if not instance.labeled:
        raise ValueError("Manhattan lower bound is only defined for labeled instances")
    best = 0
    for rid, s in instance.starts.items():
        g = instance.goals[rid]
        best = max(best, abs(s[0] - g[0]) + abs(s[1] - g[1]))
    return best


def optimality_ratio(plan: Plan, instance: Instance) -> Optional[Fraction]:
    """Makespan over the Manhattan bound; ``None`` when the bound is zero."""
    bound = manhattan_lower_bound(instance)
    if bound == 0:
        return None
    return Fraction(makespan(plan), bound)


# -- text formats -------------------------------------------------------------


def format_instance(instance: Instance) -> str:
    g = instance.grid
    ids = sorted(instance.starts)
    goal_ids = ids if instance.labeled else sorted(instance.goals)
    lines = [f"{g.rows} {g.cols} {len(ids)} {int(instance.labeled)}", str(len(g.obstacles))]
    lines += [f"{x} {y}" for x, y in sorted(g.obstacles)]
    for rid, gid in zip(ids, goal_ids):
        sx, sy = instance.starts[rid]
        gx, gy = instance.goals[gid]
        lines.append(f"{sx} {sy} {gx} {gy}")
    return "\n".join(lines) + "\n"


def parse_instance(text: str) -> Instance:
    tokens = text.split("\n")
    if tokens and tokens[-1] == "":
        tokens.pop()
    try:
        rows, cols, n, labeled = map(int, tokens[0].split())
        k = int(tokens[1])
        obstacles = [tuple(map(int, tokens[2 + i].split())) for i in range(k)]
        starts: Configuration = {}
        goals: Configuration = {}
        for i in range(n):
            sx, sy, gx, gy = map(int, tokens[2 + k + i].split())
            starts[i] = (sx, sy)
            goals[i] = (gx, gy)
    except (IndexError, ValueError) as exc:
        raise GridError(f"malformed instance text: {exc}") from exc
    if len(tokens) != 2 + k + n:
        raise GridError("trailing lines in instance text")
    return Instance(GridMap(rows, cols, frozenset(obstacles)), starts, goals, bool(labeled))


def format_plan(plan: Plan) -> str:
    ids = sorted(plan.paths)
    T = plan.horizon
    out = [f"{len(ids)} {T}"]
    for rid in ids:
        out.extend(f"{x} {y}" for x, y in plan.paths[rid])
    return "\n".join(out) + "\n"


def parse_plan(text: str, robot_ids: Optional[List[int]] = None) -> Plan:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    try:
        n, T = map(int, lines[0].split())
        ids = list(range(n)) if robot_ids is None else sorted(robot_ids)
        if len(ids) != n:
            raise GridError("robot id list does not match plan size")
        paths = {}
        cursor = 1
        for rid in ids:
            paths[rid] = [tuple(map(int, lines[cursor + t].split())) for t in range(T + 1)]
            cursor += T + 1
    except (IndexError, ValueError) as exc:
        raise GridError(f"malformed plan text: {exc}") from exc
    if cursor != len(lines):
        raise GridError("trailing lines in plan text")
    return Plan(paths)
