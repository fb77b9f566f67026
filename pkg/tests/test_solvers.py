import pytest

from conftest import uniform
from rubikmrpp.bench import GeneratorSpec, generate_instance
from rubikmrpp.grid_core import GridMap, Instance, Plan, makespan, validate_plan
from rubikmrpp.solvers import (
    SolverConfig,
    SolverError,
    SolverTimeout,
    compact_plan,
    lifelong_batch_run,
    rth_layout,
    rtlm_layout,
    rtm_bound,
    solve,
    solve_rtlm,
    solve_rtm,
    split_lengths,
)


def test_split_lengths():
    assert split_lengths(9) == [3, 3, 3]
    assert split_lengths(10) == [3, 3, 2, 2]
    assert split_lengths(11) == [3, 3, 3, 2]
    assert split_lengths(8, prefer=2) == [2, 2, 2, 2]
    with pytest.raises(Exception):
        split_lengths(1)


def test_layout_capacity():
    assert rth_layout(GridMap(30, 30)).capacity() == 300
    assert rtlm_layout(GridMap(30, 20)).capacity() == 300


@pytest.mark.parametrize("orientation", ["RCR", "CRC"])
@pytest.mark.parametrize("matching", ["plain", "lba"])
def test_rth_variants_valid(small_uniform, orientation, matching):
    b = solve(small_uniform, SolverConfig(orientation=orientation, matching=matching))
    assert validate_plan(small_uniform, b.plan) is None
    assert b.makespan <= b.stats["makespan_raw"]
    assert b.stats["core"] == b.phases["round1"] + b.phases["round2"] + b.phases["round3"]
    assert b.stats["label"] == ("RTH" + ("-LL" if orientation == "CRC" else "") + ("-LBA" if matching == "lba" else ""))


def test_rth_mixed_bands_on_one_axis():
    inst = uniform(14, 9, 40, seed=2)
    assert validate_plan(inst, solve(inst).plan) is None
    with pytest.raises(SolverError):
        solve(uniform(14, 10, 40, seed=2))


def test_ip_export_writes_lp(tmp_path, small_uniform):
    out = tmp_path / "model.lp"
    b = solve(small_uniform, SolverConfig(matching="ip-export", ip_export_path=str(out)))
    assert validate_plan(small_uniform, b.plan) is None
    assert out.read_text() == b.artifacts["ip_model"]
    assert "Binaries" in out.read_text() or "Binary" in out.read_text()


def test_rtlm_half_density():
    inst = uniform(12, 10, 60, seed=1)
    b = solve_rtlm(inst)
    assert validate_plan(inst, b.plan) is None
    assert b.stats["label"] == "RTLM-LBA"


def test_obstacle_mode():
    inst = generate_instance(GeneratorSpec("sorting-obstacles", 18, 18, density=2 / 9, seed=4))
    b = solve(inst, SolverConfig(obstacle_mode=True))
    assert validate_plan(inst, b.plan) is None
    with pytest.raises(SolverError):
        solve(inst)


def test_rtm_full_density_bound():
    inst = generate_instance(GeneratorSpec("uniform", 9, 9, n=81, seed=0))
    b = solve_rtm(inst)
    assert validate_plan(inst, b.plan) is None
    assert b.makespan <= rtm_bound(9, 9) == 7 * 9 + 14 * 9


def test_rtm_unsupported_dimension():
    with pytest.raises(SolverError):
        solve(uniform(5, 6, 30), SolverConfig(algorithm="RTM"))


def test_identity_instance():
    grid = GridMap(6, 6)
    inst = Instance(grid, {0: (1, 1), 1: (4, 5)}, {0: (1, 1), 1: (4, 5)})
    for algo in ("RTH", "RTLM"):
        b = solve(inst, SolverConfig(algorithm=algo))
        assert b.makespan == 0 and b.ratio is None


def test_too_many_robots_rejected():
    with pytest.raises(SolverError):
        solve(uniform(6, 6, 13))


def test_deadline_enforced(small_uniform):
    with pytest.raises(SolverTimeout):
        solve(small_uniform, SolverConfig(deadline=0.0))


def test_config_validation():
    with pytest.raises(SolverError):
        SolverConfig(algorithm="CBS")
    with pytest.raises(SolverError):
        SolverConfig(matching="ilp")


def test_compaction_never_worse():
    inst = uniform(15, 12, 60, seed=8)
    raw = solve(inst, SolverConfig(compact=False)).plan
    packed = compact_plan(raw)
    assert validate_plan(inst, packed) is None
    assert makespan(packed) <= makespan(raw)
    assert compact_plan(Plan({})) == Plan({})


def test_compaction_keeps_following_chain():
    inst = Instance(GridMap(1, 5), {0: (1, 1), 1: (1, 2)}, {0: (1, 2), 1: (1, 3)})
    slow = Plan({0: [(1, 1), (1, 1), (1, 1), (1, 2)], 1: [(1, 2), (1, 2), (1, 3), (1, 3)]})
    fast = compact_plan(slow)
    assert validate_plan(inst, fast) is None and makespan(fast) == 1


def test_lifelong_batches():
    stats = lifelong_batch_run(GridMap(12, 12), 48, 3, seed=1)
    assert len(stats.makespans) == 3 and stats.goals_reached == 144
    assert 0 < stats.ratio(12) < 1.5
    still = lifelong_batch_run(GridMap(9, 9), 10, 2, identity_goals=True)
    assert still.throughput is None and still.ratio(9) is None


def test_bundle_json(small_uniform):
    import json

    b = solve(small_uniform)
    data = json.loads(b.to_json())
    assert set(data["phases"]) == {"anon_in", "round1", "round2", "round3", "anon_out"}
    assert data["stats"]["makespan"] == b.makespan
