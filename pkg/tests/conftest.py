import pytest

from rubikmrpp.bench import GeneratorSpec, generate_instance
from rubikmrpp.grid_core import GridMap, Instance, Plan
from rubikmrpp.shuffle_motion import gadget_tables


def uniform(rows, cols, n, seed=0):
    return generate_instance(GeneratorSpec("uniform", rows, cols, n=n, seed=seed))


def gadget_plan(k, mask, transpose=False):
    """Replay a stored gadget script on a full k x 2 patch (or its 2 x k transpose)."""
    def cell(p):
        i, j = divmod(p, 2)
        return (j + 1, i + 1) if transpose else (i + 1, j + 1)

    occ = list(range(2 * k))  # occ[cell] = robot
    paths = {r: [cell(r)] for r in range(2 * k)}
    for mv in gadget_tables()[k][mask]:
        nxt = [0] * (2 * k)
        for p in range(2 * k):
            nxt[mv[p]] = occ[p]
        occ = nxt
        for p, r in enumerate(occ):
            paths[r].append(cell(p))
    grid = GridMap(2, k) if transpose else GridMap(k, 2)
    starts = {r: path[0] for r, path in paths.items()}
    goals = {r: path[-1] for r, path in paths.items()}
    return Instance(grid, starts, goals), Plan(paths)


@pytest.fixture
def small_uniform():
    return uniform(12, 12, 48, seed=3)


ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        title, ok, detail, seconds = ACCEPTANCE[num]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {num:>2} {title} ({seconds:.1f}s) {detail}")
