import xml.etree.ElementTree as ET

import pytest

from conftest import gadget_plan
from rubikmrpp.bench import (
    CSV_COLUMNS,
    BenchmarkRow,
    GeneratorSpec,
    generate_instance,
    glyph_positions,
    parse_csv,
    render_frames,
    render_svg,
    run_benchmark,
    summarize,
    write_csv,
)
from rubikmrpp.bench import runner
from rubikmrpp.bench.cli import main
from rubikmrpp.grid_core import GridError, GridMap, Instance, Plan, format_instance, parse_plan
from rubikmrpp.solvers import solve


def test_uniform_reproducible():
    spec = GeneratorSpec("uniform", 30, 30, n=300, seed=1)
    a, b = generate_instance(spec), generate_instance(spec)
    assert a == b and a.n == 300
    assert len(set(a.starts.values())) == 300 and len(set(a.goals.values())) == 300
    assert generate_instance(GeneratorSpec("uniform", 30, 30, n=300, seed=2)) != a


def test_sorting_obstacles_9x9():
    inst = generate_instance(GeneratorSpec("sorting-obstacles", 9, 9, n=10))
    expected = {(3 * a + 2, 3 * b + 2) for a in range(3) for b in range(3)}
    assert inst.grid.obstacles == expected and len(expected) == 9
    assert not set(inst.starts.values()) & expected


def test_squares_centrosymmetric():
    inst = generate_instance(GeneratorSpec("squares", 12, 12, density=1 / 3))
    assert inst.n == 48
    for rid, (x, y) in inst.starts.items():
        assert inst.goals[rid] == (13 - x, 13 - y)
    with pytest.raises(GridError):
        generate_instance(GeneratorSpec("squares", 12, 9, n=5))


def test_blocks_preserve_offsets():
    inst = generate_instance(GeneratorSpec("blocks", 12, 9, n=30, block=3, seed=5))
    moved = {}
    for rid, (x, y) in inst.starts.items():
        gx, gy = inst.goals[rid]
        assert ((x - 1) % 3, (y - 1) % 3) == ((gx - 1) % 3, (gy - 1) % 3)
        src = ((x - 1) // 3, (y - 1) // 3)
        dst = ((gx - 1) // 3, (gy - 1) // 3)
        assert moved.setdefault(src, dst) == dst
    assert len(set(moved.values())) == len(moved)


def test_generator_errors():
    with pytest.raises(GridError):
        generate_instance(GeneratorSpec("sorting-obstacles", 10, 9, n=3))
    with pytest.raises(GridError):
        generate_instance(GeneratorSpec("uniform", 3, 3, n=10))
    with pytest.raises(GridError):
        generate_instance(GeneratorSpec("spiral", 3, 3, n=1))


def test_csv_round_trip():
    specs = [GeneratorSpec("uniform", 12, 12, density=1 / 3), GeneratorSpec("uniform", 10, 10, n=30)]
    rows = run_benchmark(specs, ["RTH", "RTM"], [0, 1])
    assert [r.status for r in rows] == ["ok"] * 4 + ["unsupported"] * 2 + ["ok"] * 2
    assert rows[4].reason and rows[4].ratio is None
    assert parse_csv(write_csv(rows)) == rows
    assert write_csv(rows).split("\n")[0] == ",".join(CSV_COLUMNS)
    det = parse_csv(write_csv(rows, deterministic=True))
    assert all(r.wall_time is None for r in det)


def test_identity_row_has_zero_makespan():
    rows = run_benchmark([GeneratorSpec("uniform", 9, 9, n=0)], ["RTH"], [0])
    assert len(rows) == 1 and rows[0].ok and rows[0].makespan == 0 and rows[0].ratio is None


def test_invalid_plan_gets_no_ratio(monkeypatch):
    def broken(instance, config):
        b = solve(instance, config)
        rid = min(b.plan.paths)
        b.plan.paths[rid] = [b.plan.paths[rid][0]] * len(b.plan.paths[rid])
        return b

    monkeypatch.setattr(runner, "solve", broken)
    row = runner.run_one(GeneratorSpec("uniform", 12, 12, n=40, seed=1), "RTH")
    assert row.status == "invalid" and row.ratio is None and row.makespan is None


def test_timeout_recorded():
    row = runner.run_one(GeneratorSpec("uniform", 30, 30, n=300), "RTH", time_limit=0.0)
    assert row.status == "timeout"


def test_summary_statistics():
    rows = [
        BenchmarkRow("uniform", 9, 9, 27, s, "RTH", "ok", makespan=m, lower_bound=10, ratio=m / 10)
        for s, m in enumerate((10, 20))
    ] + [BenchmarkRow("uniform", 9, 9, 27, 2, "RTH", "error", reason="boom")]
    (t,) = summarize(rows)
    assert (t["runs"], t["ok"]) == (3, 2)
    assert t["makespan_mean"] == 15 and t["makespan_std"] == 5
    assert t["ratio_mean"] == pytest.approx(1.5)


def test_scaled_size_sweep_ratio_decreases():
    specs = [GeneratorSpec("uniform", c * 3 // 2, c, density=1 / 3) for c in (12, 24, 36)]
    table = summarize(run_benchmark(specs, ["RTH"], range(3)))
    ratios = [t["ratio_mean"] for t in table]
    assert ratios == sorted(ratios, reverse=True)


def test_aspect_ratio_sweep_favours_long_grids():
    specs = [GeneratorSpec("uniform", r, c, density=1 / 3) for r, c in ((180, 20), (120, 30), (60, 60))]
    table = summarize(run_benchmark(specs, ["RTH"], range(2)))
    ratios = [t["ratio_mean"] for t in table]
    assert ratios == sorted(ratios)


def test_render_empty_plan_is_static():
    inst = Instance(GridMap(3, 3), {}, {})
    svg = render_svg(Plan({}), inst)
    root = ET.fromstring(svg)
    assert not [e for e in root.iter() if e.tag.endswith("animate")]
    assert len(render_frames(Plan({}), inst)) == 1


def test_render_swap_frames():
    inst, plan = gadget_plan(3, 0b010, transpose=True)
    frames = render_frames(plan, inst)
    assert len(frames) == 4
    for t, f in enumerate(frames):
        glyphs = glyph_positions(f, final=False)
        assert len(glyphs) == 6 and glyphs == plan.config_at(t)


def test_render_rth_animation_final_frame():
    inst = generate_instance(GeneratorSpec("uniform", 30, 30, n=300, seed=0))
    b = solve(inst)
    svg = render_svg(b.plan, inst)
    assert glyph_positions(svg) == dict(inst.goals)
    assert glyph_positions(svg, final=False) == dict(inst.starts)


def test_cli_round_trip(tmp_path, capsys):
    inst_file, plan_file = tmp_path / "i.txt", tmp_path / "p.txt"
    assert main(["gen", "12x12", "--seed", "3", "-o", str(inst_file)]) == 0
    assert main(["solve", str(inst_file), "--solver", "RTH-LBA", "-o", str(plan_file)]) == 0
    assert main(["validate", str(inst_file), str(plan_file)]) == 0
    assert "valid" in capsys.readouterr().out
    assert main(["render", str(inst_file), str(plan_file), "--frames", str(tmp_path / "fr")]) == 0
    n_frames = parse_plan(plan_file.read_text()).horizon + 1
    assert len(list((tmp_path / "fr").iterdir())) == n_frames


def test_cli_validate_rejects_bad_plan(tmp_path):
    inst = Instance(GridMap(2, 2), {0: (1, 1)}, {0: (2, 2)})
    (tmp_path / "i.txt").write_text(format_instance(inst))
    (tmp_path / "p.txt").write_text("1 0\n1 1\n")
    assert main(["validate", str(tmp_path / "i.txt"), str(tmp_path / "p.txt")]) == 1


def test_cli_bench_exit_codes(tmp_path):
    out = tmp_path / "b.csv"
    assert main(["bench", "--sizes", "12x12", "--seeds", "0-1", "--deterministic", "-o", str(out)]) == 0
    assert len(parse_csv(out.read_text())) == 2
    assert main(["bench", "--sizes", "10x10", "--n", "30", "--seeds", "0", "-o", str(out)]) == 1
    assert main(["solve", str(tmp_path / "missing.txt")]) == 2
