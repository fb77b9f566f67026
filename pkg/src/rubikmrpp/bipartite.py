"""Hopcroft-Karp maximum matching on small dense bipartite graphs.

Vertices are integers ``0..n_left-1`` and ``0..n_right-1``. Adjacency lists
are scanned in the given order, so results are deterministic.
"""
from __future__ import annotations

from collections import deque
from typing import List, Optional, Sequence

_INF = float("inf")


def hopcroft_karp(adj: Sequence[Sequence[int]], n_right: int) -> List[Optional[int]]:
    """Return ``match[left] -> right`` (``None`` where unmatched)."""
    n_left = len(adj)
    match_l: List[Optional[int]] = [None] * n_left
    match_r: List[Optional[int]] = [None] * n_right
    dist = [0.0] * n_left

    def bfs() -> bool:
        q = deque()
        for u in range(n_left):
            if match_l[u] is None:
                dist[u] = 0
                q.append(u)
            else:
                dist[u] = _INF
        found = False
        while q:
            u = q.popleft()
            for v in adj[u]:
                w = match_r[v]
                if w is None:
                    found = True
                elif dist[w] == _INF:
                    dist[w] = dist[u] + 1
                    q.append(w)
        return found

    def dfs(u: int) -> bool:
        for v in adj[u]:
            w = match_r[v]
            if w is None or (dist[w] == dist[u] + 1 and dfs(w)):
                match_l[u] = v
                match_r[v] = u
                return True
        dist[u] = _INF
        return False

    while bfs():
        for u in range(n_left):
            if match_l[u] is None:
                dfs(u)
    return match_l


def perfect_matching(adj: Sequence[Sequence[int]], n_right: int) -> Optional[List[int]]:
    """A perfect matching as a list, or ``None`` if none exists."""
    if len(adj) != n_right:
        return None
    m = hopcroft_karp(adj, n_right)
    if any(v is None for v in m):
        return None
    return m  # type: ignore[return-value]
