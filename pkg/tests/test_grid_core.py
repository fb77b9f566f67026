from fractions import Fraction
import random
from collections import deque
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import gadget_plan
from rubikmrpp.grid_core import (
    GridError,
    GridMap,
    Instance,
    Plan,
    check_configuration,
    format_instance,
    format_plan,
    makespan,
    manhattan_lower_bound,
    optimality_ratio,
    parse_instance,
    parse_plan,
    validate_plan,
    validate_step,
)


def legal_by_definition(grid, frm, to):
    cells = list(to.values())
    if len(set(cells)) != len(cells):
        return False
    for r in frm:
        u, v = frm[r], to[r]
        if not grid.is_free(v) or abs(u[0] - v[0]) + abs(u[1] - v[1]) > 1:
            return False
    for a in frm:
        for b in frm:
            if a < b and frm[a] == to[b] and frm[b] == to[a] and frm[a] != frm[b]:
                return False
    return True


@pytest.mark.parametrize("rows,cols,total", [(2, 2, 3 ** 4), (2, 3, 3 ** 4 * 4 ** 2)])
def test_validate_step_exhaustive_full_grid(rows, cols, total):
    grid = GridMap(rows, cols)
    cells = grid.free_cells()
    frm = dict(enumerate(cells))
    options = [[p] + list(grid.neighbors(p)) for p in cells]
    checked = 0
    for dest in product(*options):
        to = dict(enumerate(dest))
        assert (validate_step(grid, frm, to) is None) == legal_by_definition(grid, frm, to), dest
        checked += 1
    assert checked == total


def test_validate_step_partial_occupancy_2x3():
    grid = GridMap(2, 3)
    cells = grid.free_cells()
    for occupied in product((0, 1), repeat=6):
        frm = {i: c for i, c in enumerate(cells) if occupied[i]}
        ids = sorted(frm)
        options = [[frm[r]] + list(grid.neighbors(frm[r])) for r in ids]
        for dest in product(*options):
            to = dict(zip(ids, dest))
            assert (validate_step(grid, frm, to) is None) == legal_by_definition(grid, frm, to)


def test_rotation_along_boundary_cycle_is_legal():
    grid = GridMap(2, 3)
    ring = [(1, 1), (1, 2), (1, 3), (2, 3), (2, 2), (2, 1)]
    frm = dict(enumerate(ring))
    to = {i: ring[(i + 1) % 6] for i in range(6)}
    assert validate_step(grid, frm, to) is None


def test_edge_swap_and_obstacle_reported():
    grid = GridMap(1, 3, frozenset({(1, 3)}))
    v = validate_step(grid, {0: (1, 1), 1: (1, 2)}, {0: (1, 2), 1: (1, 1)})
    assert v.kind == "edge-swap" and v.robots == (0, 1)
    v = validate_step(grid, {0: (1, 2)}, {0: (1, 3)})
    assert v.kind == "obstacle-entry"


def test_violation_order_is_deterministic():
    grid = GridMap(1, 4)
    frm = {0: (1, 1), 1: (1, 2), 2: (1, 3), 3: (1, 4)}
    to = {0: (1, 2), 1: (1, 1), 2: (1, 4), 3: (1, 3)}
    assert validate_step(grid, frm, to).robots == (0, 1)


def test_out_of_bounds_and_jump():
    grid = GridMap(2, 2)
    assert validate_step(grid, {0: (1, 1)}, {0: (0, 1)}).kind == "out-of-bounds"
    assert validate_step(grid, {0: (1, 1)}, {0: (2, 2)}).kind == "non-adjacent-move"


def test_fig3_swap_plan_three_steps():
    inst, plan = gadget_plan(3, 0b010, transpose=True)
    assert inst.grid.rows == 2 and inst.grid.cols == 3
    # the middle pair trades places, everyone else returns home
    assert inst.goals[2] == inst.starts[3] and inst.goals[3] == inst.starts[2]
    assert all(inst.goals[r] == inst.starts[r] for r in (0, 1, 4, 5))
    assert validate_plan(inst, plan) is None
    assert makespan(plan) == 3


def test_fig5_triple_swap_seven_steps():
    inst, plan = gadget_plan(3, 0b111)
    assert validate_plan(inst, plan) is None
    assert makespan(plan) == 7


def test_identity_plan():
    grid = GridMap(3, 3)
    inst = Instance(grid, {0: (1, 1), 1: (2, 2)}, {0: (1, 1), 1: (2, 2)})
    plan = Plan({0: [(1, 1)], 1: [(2, 2)]})
    assert validate_plan(inst, plan) is None
    assert makespan(plan) == 0
    assert manhattan_lower_bound(inst) == 0
    assert optimality_ratio(plan, inst) is None


def test_wrong_endpoint_when_goals_permuted():
    grid = GridMap(1, 3)
    inst = Instance(grid, {0: (1, 1), 1: (1, 3)}, {0: (1, 1), 1: (1, 3)})
    plan = Plan({0: [(1, 1), (1, 2), (1, 3)], 1: [(1, 3), (1, 3), (1, 3)]})
    assert validate_plan(inst, plan).kind == "vertex-collision"
    inst2 = Instance(grid, {0: (1, 1), 1: (1, 3)}, {0: (1, 3), 1: (1, 1)})
    wait = Plan({0: [(1, 1)], 1: [(1, 3)]})
    v = validate_plan(inst2, wait)
    assert v.kind == "wrong-endpoint" and v.robots == (0, 1)


def test_unlabeled_goal_coverage():
    grid = GridMap(1, 3)
    inst = Instance(grid, {0: (1, 1)}, {5: (1, 2)}, labeled=False)
    assert validate_plan(inst, Plan({0: [(1, 1), (1, 2)]})) is None
    assert validate_plan(inst, Plan({0: [(1, 1)]})).kind == "wrong-endpoint"
    with pytest.raises(ValueError):
        manhattan_lower_bound(inst)


def test_shortest_path_ratio_one():
    grid = GridMap(3, 3)
    inst = Instance(grid, {0: (1, 1)}, {0: (3, 3)})
    plan = Plan({0: [(1, 1), (1, 2), (1, 3), (2, 3), (3, 3)]})
    assert manhattan_lower_bound(inst) == 4
    assert optimality_ratio(plan, inst) == Fraction(1)


def test_instance_rejects_bad_configurations():
    grid = GridMap(2, 2, frozenset({(1, 1)}))
    with pytest.raises(GridError):
        Instance(grid, {0: (1, 1)}, {0: (2, 2)})
    with pytest.raises(GridError):
        Instance(grid, {0: (1, 2), 1: (1, 2)}, {0: (2, 2), 1: (2, 1)})
    with pytest.raises(GridError):
        GridMap(0, 3)
    assert check_configuration(grid, {0: (3, 1)}).kind == "out-of-bounds"


@given(st.integers(0, 5))
def test_makespan_invariant_under_trailing_waits(extra):
    plan = Plan({0: [(1, 1), (1, 2), (1, 2)], 1: [(2, 1), (2, 1), (2, 2)]})
    assert makespan(plan.padded(plan.horizon + extra)) == 2
    assert plan.padded(5).trimmed().horizon == 2


@settings(max_examples=50)
@given(st.integers(1, 6), st.integers(1, 6), st.data())
def test_text_round_trip(rows, cols, data):
    grid = GridMap(rows, cols, frozenset({(1, 1)}) if rows * cols > 2 else frozenset())
    free = grid.free_cells()
    n = data.draw(st.integers(0, len(free)))
    starts = data.draw(st.permutations(free))[:n]
    goals = data.draw(st.permutations(free))[:n]
    inst = Instance(grid, dict(enumerate(starts)), dict(enumerate(goals)))
    assert parse_instance(format_instance(inst)) == inst
    plan = Plan({i: [p, p] for i, p in enumerate(starts)})
    assert parse_plan(format_plan(plan)) == plan


def labeled_optimum(grid, starts, goals):
    start, goal = tuple(starts), tuple(goals)
    opts = {p: [p] + list(grid.neighbors(p)) for p in grid.free_cells()}
    dist = {start: 0}
    q = deque([start])
    while q:
        st = q.popleft()
        if st == goal:
            return dist[st]
        frm = dict(enumerate(st))
        for nxt in product(*(opts[p] for p in st)):
            if nxt not in dist and validate_step(grid, frm, dict(enumerate(nxt))) is None:
                dist[nxt] = dist[st] + 1
                q.append(nxt)
    return None


@pytest.mark.parametrize("seed", range(25))
def test_manhattan_bound_below_labeled_optimum(seed):
    rng = random.Random(seed)
    grid = GridMap(rng.randint(2, 3), rng.randint(2, 3))
    cells = grid.free_cells()
    n = rng.randint(1, 3)
    s, g = rng.sample(cells, n), rng.sample(cells, n)
    opt = labeled_optimum(grid, s, g)
    if opt is not None:
        assert manhattan_lower_bound(Instance(grid, dict(enumerate(s)), dict(enumerate(g)))) <= opt
