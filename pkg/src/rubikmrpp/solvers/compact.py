"""Plan compaction that keeps the order in which robots visit each cell.

Every move fires as soon as its robot's previous move is done and the
destination's previous visitor has left (or leaves in the same step without
an edge swap). Each move then happens no later than in the input plan, so
the makespan never grows.
"""
from __future__ import annotations

import numpy as np

from ..grid_core import Plan


def compact_plan(plan: Plan) -> Plan:
    rids = sorted(plan.paths)
    if not rids:
        return Plan({})
    cells = sorted({p for path in plan.paths.values() for p in path})
    cid = {p: i for i, p in enumerate(cells)}
    n, C = len(rids), len(cells)
    traj = np.array([[cid[p] for p in plan.paths[r]] for r in rids], dtype=np.int64)
    rob, tt = np.nonzero(traj[:, 1:] != traj[:, :-1])  # per robot, in time order
    tgt = traj[rob, tt + 1]
    if not len(tgt):
        return Plan({r: [plan.paths[r][0]] for r in rids})
    n_moves = np.bincount(rob, minlength=n)
    first = np.concatenate(([0], np.cumsum(n_moves)))[:-1]

    # per cell, robots in order of arrival (initial occupants first)
    arr_cell = np.concatenate((traj[:, 0], tgt))
    arr_time = np.concatenate((np.full(n, -1), tt + 1))
    arr_rob = np.concatenate((np.arange(n), rob))
    order = np.lexsort((arr_time, arr_cell))
    seq = arr_rob[order]
    sorted_cells = arr_cell[order]
    cell_start = np.searchsorted(sorted_cells, np.arange(C))
    cell_end = np.searchsorted(sorted_cells, np.arange(C), side="right")

    occ = np.full(C, -1, dtype=np.int64)
    occ[traj[:, 0]] = np.arange(n)
    ptr = cell_start.copy()
    ptr[traj[:, 0]] += 1
    pos = traj[:, 0].copy()
    step = np.zeros(n, dtype=np.int64)
    fired_at = np.zeros(len(tgt), dtype=np.int64)
    t = 0
    live = np.nonzero(n_moves > 0)[0]
    while live.size:
        t += 1
        v = tgt[first[live] + step[live]]
        expected = np.where(ptr[v] < cell_end[v], seq[np.minimum(ptr[v], len(seq) - 1)], -1)
        cand = np.zeros(n, dtype=bool)
        cand[live[expected == live]] = True
        o = occ[v]
        alive = cand[live] & ((o < 0) | cand[np.maximum(o, 0)])
        while True:
            flag = np.zeros(n, dtype=bool)
            flag[live[alive]] = True
            nxt = alive & ((o < 0) | flag[np.maximum(o, 0)])
            if np.array_equal(nxt, alive):
                break
            alive = nxt
        fire = live[alive]
        if not fire.size:
            raise AssertionError("compaction stalled; input plan is inconsistent")
        fv = v[alive]
        occ[pos[fire]] = -1
        occ[fv] = fire
        ptr[fv] += 1
        pos[fire] = fv
        fired_at[first[fire] + step[fire]] = t
        step[fire] += 1
        live = live[step[live] < n_moves[live]]

    done = np.zeros((n, t + 1), dtype=np.int64)
    np.add.at(done, (rob, fired_at), 1)
    done = np.cumsum(done, axis=1)
    idx = np.clip(first[:, None] + done - 1, 0, len(tgt) - 1)
    out = np.where(done > 0, tgt[idx], traj[:, :1])
    return Plan({r: [cells[c] for c in out[i].tolist()] for i, r in enumerate(rids)})
