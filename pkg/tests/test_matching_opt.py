import random
from itertools import permutations, product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rubikmrpp.matching_opt import (
    AssignmentError,
    IPModel,
    LineCost,
    Projection,
    bottleneck_assignment,
    build_ip_model,
    export_lp,
    ip_objective,
    lba_matchings,
    matching_bottleneck,
    parse_lp,
    solve_ip_exact_small,
)
from rubikmrpp.rubik_table import (
    RCR,
    AbstractTable,
    Item,
    apply_shuffle_plan,
    build_color_graph,
    decompose_matchings,
    plan_labeled,
)


def exhaustive_bottleneck(w):
    n = len(w)
    return min(max(w[i][p[i]] for i in range(n)) for p in permutations(range(n)))


def projection(m1, m2, seed):
    rng = random.Random(seed)
    t = AbstractTable(m1, m2)
    cells = [(a, b) for a in range(m1) for b in range(m2)]
    goals = cells[:]
    rng.shuffle(goals)
    for i, (c, g) in enumerate(zip(cells, goals)):
        t.place(Item(i, goal=g), c)
    return Projection(t, RCR, {i: c[1] for i, c in enumerate(cells)}, {i: g[1] for i, g in enumerate(goals)})


def test_bottleneck_examples():
    assert bottleneck_assignment([[0, 9], [9, 0]]) == ([0, 1], 0)
    assert bottleneck_assignment([[1, 2], [2, 4]])[1] == 2


def test_bottleneck_missing_edges():
    match, value = bottleneck_assignment([[None, 3], [1, None]])
    assert match == [1, 0] and value == 3
    with pytest.raises(AssignmentError):
        bottleneck_assignment([[1, None], [2, None]])


def test_bottleneck_5x5_exhaustive():
    rng = random.Random(7)
    for _ in range(30):
        w = [[rng.randint(0, 30) for _ in range(5)] for _ in range(5)]
        match, value = bottleneck_assignment(w)
        assert value == exhaustive_bottleneck(w)
        assert max(w[i][match[i]] for i in range(5)) == value


def test_bottleneck_is_deterministic():
    w = [[1, 1, 1], [1, 1, 1], [1, 1, 1]]
    assert bottleneck_assignment(w) == bottleneck_assignment(w) == ([0, 1, 2], 1)


def test_line_cost_lambda():
    assert LineCost(0)(5, 1, 2) == 3
    assert LineCost(1)(5, 1, 2) == 4
    assert LineCost(0.5)(5, 1, 2) == 3.5


def test_identity_projection_has_zero_bottleneck():
    t = AbstractTable(3, 3)
    for r in range(3):
        for c in range(3):
            t.place(Item(r * 3 + c, goal=(r, c)), (r, c))
    proj = Projection(t, RCR, {i: i % 3 for i in range(9)}, {i: i % 3 for i in range(9)})
    res = lba_matchings(proj)
    assert res.stage2 == 0 and not res.fallback
    assert all(slot == i % 3 for i, slot in res.matchings.item_slot().items())


@pytest.mark.parametrize("seed", range(10))
def test_lba_valid_and_no_worse_than_plain(seed):
    proj = projection(4, 3, seed)
    res = lba_matchings(proj)
    plan = plan_labeled(proj.table, RCR, res.matchings)
    assert all(c == it.goal for c, it in apply_shuffle_plan(proj.table, plan).items())
    plain = decompose_matchings(build_color_graph(proj.table, RCR))
    assert res.stage2 <= matching_bottleneck(proj, plain)


def test_ip_model_counts():
    t = AbstractTable(1, 3)
    for i in range(3):
        t.place(Item(i, goal=(0, 2 - i)), (0, i))
    model = build_ip_model(Projection(t, RCR, {i: i for i in range(3)}, {i: 2 - i for i in range(3)}))
    assert len(model.binaries) == 9 and model.continuous == ["z0", "z1"]
    assert sum(c.name.startswith("item_") for c in model.constraints) == 3


def test_ip_single_robot_objective():
    t = AbstractTable(1, 1)
    t.place(Item(0, goal=(0, 0)), (0, 0))
    model = build_ip_model(Projection(t, RCR, {0: 2.0}, {0: 7.0}, [4.0]))
    slot_of, obj = solve_ip_exact_small(model)
    assert slot_of == {0: 0} and obj == abs(4 - 2) + abs(4 - 7)


def test_empty_model_exports_header_only():
    text = export_lp(IPModel())
    assert "Minimize" in text and "x_" not in text


def test_lp_round_trip_and_stability():
    model = build_ip_model(projection(3, 3, 1))
    text = export_lp(model)
    assert parse_lp(text) == model
    assert export_lp(parse_lp(text)) == text == export_lp(build_ip_model(projection(3, 3, 1)))


@pytest.mark.parametrize("seed", range(4))
def test_exact_ip_dominates_lba(seed):
    proj = projection(4, 3, seed)
    model = build_ip_model(proj)
    slot = lba_matchings(proj).matchings.item_slot()
    _, obj = solve_ip_exact_small(model, slot)
    assert obj <= ip_objective(model, slot)


def test_linearization_matches_direct_evaluation():
    proj = projection(2, 2, 3)
    model = build_ip_model(proj)
    items = model.meta["items"]
    for slots in product(range(2), repeat=len(items)):
        slot_of = dict(zip(items, slots))
        x = {f"x_{k}_{i}": int(slot_of[i] == k) for i in items for k in range(2)}
        z0 = max([0] + [-c.coeffs[v] * x[v] for c in model.constraints if c.name.startswith("z0_")
                         for v in c.coeffs if v != "z0"])
        z1 = max([0] + [-c.coeffs[v] * x[v] for c in model.constraints if c.name.startswith("z1_")
                         for v in c.coeffs if v != "z1"])
        assert z0 + z1 == ip_objective(model, slot_of)


def test_exact_solver_size_limit():
    with pytest.raises(ValueError):
        solve_ip_exact_small(build_ip_model(projection(9, 9, 0)))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(0, 9), min_size=4, max_size=4), min_size=4, max_size=4))
def test_bottleneck_property(w):
    assert bottleneck_assignment(w)[1] == exhaustive_bottleneck(w)
