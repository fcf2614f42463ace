"""Reference shortest-path implementations used as correctness oracles.

These are deliberately independent of the relaxation kernels in
:mod:`sparsepath.solver`: binary-heap Dijkstra (non-negative weights
only), Bellman-Ford (handles negative weights and reports reachable
negative cycles), and Floyd-Warshall (dense all-pairs, capped by size).
They exist to cross-check the kernels and to serve as benchmark
comparators, not to be fast.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from math import inf

import numpy as np

from .errors import GraphSizeError, NegativeWeightError
from .graph import CsrGraph
from .solver import DistanceVector

__all__ = [
    "OracleResult",
    "FloydResult",
    "dijkstra_sssp",
    "bellman_ford_sssp",
    "floyd_warshall_apsp",
    "DEFAULT_FLOYD_CAP",
]

DEFAULT_FLOYD_CAP = 2000


@dataclass
class OracleResult:
    dist: DistanceVector
    negative_cycle: bool
    relaxations: int


@dataclass
class FloydResult:
    matrix: np.ndarray
    negative_cycle: bool
    relaxations: int


def _find_negative_edge(g: CsrGraph) -> tuple[int, int, float] | None:
    if g.m == 0:
        return None
    k = int(np.argmin(g.val))
    if g.val[k] >= 0:
        return None
    u = int(np.searchsorted(g.row_ptr, k, side="right")) - 1
    return u, int(g.col[k]), float(g.val[k])


def dijkstra_sssp(g: CsrGraph, source: int) -> OracleResult:
    """Binary-heap Dijkstra with lazy deletion; rejects negative weights."""
    if not 0 <= source < g.n:
        raise ValueError(f"source {source} out of range for n={g.n}")
    bad = _find_negative_edge(g)
    if bad is not None:
        raise NegativeWeightError(
            f"Dijkstra requires non-negative weights; edge "
            f"{bad[0]} -> {bad[1]} has weight {bad[2]}"
        )
    row_ptr = g.row_ptr.tolist()
    col = g.col.tolist()
    val = g.val.tolist()
    dist = [inf] * g.n
    dist[source] = 0.0
    heap = [(0.0, source)]
    relaxations = 0
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue  # stale entry
        for k in range(row_ptr[u], row_ptr[u + 1]):
            relaxations += 1
            v = col[k]
            nd = d + val[k]
            if nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return OracleResult(
        dist=DistanceVector(dist=np.array(dist), source=source),
        negative_cycle=False,
        relaxations=relaxations,
    )


def bellman_ford_sssp(g: CsrGraph, source: int) -> OracleResult:
    """Textbook Bellman-Ford: n-1 passes in CSR row order, then a
    detection pass.  ``negative_cycle`` is True iff the extra pass can
    still improve a distance with a finite tail, i.e. iff some negative
    cycle is reachable from the source."""
    if not 0 <= source < g.n:
        raise ValueError(f"source {source} out of range for n={g.n}")
    row_ptr = g.row_ptr.tolist()
    col = g.col.tolist()
    val = g.val.tolist()
    n = g.n
    dist = [inf] * n
    dist[source] = 0.0
    relaxations = 0
    for _ in range(max(n - 1, 0)):
        changed = False
        for u in range(n):
            du = dist[u]
            if du == inf:
                continue
            for k in range(row_ptr[u], row_ptr[u + 1]):
                relaxations += 1
                v = col[k]
                nd = dist[u] + val[k]
                if nd < dist[v]:
                    dist[v] = nd
                    changed = True
        if not changed:
            break
    negative_cycle = False
    for u in range(n):
        if dist[u] == inf:
            continue
        for k in range(row_ptr[u], row_ptr[u + 1]):
            relaxations += 1
            if dist[u] + val[k] < dist[col[k]]:
                negative_cycle = True
                break
        if negative_cycle:
            break
    return OracleResult(
        dist=DistanceVector(dist=np.array(dist), source=source),
        negative_cycle=negative_cycle,
        relaxations=relaxations,
    )


def floyd_warshall_apsp(g: CsrGraph, cap: int = DEFAULT_FLOYD_CAP) -> FloydResult:
    """Dense dynamic-programming all-pairs matrix.

    Refuses graphs with more than ``cap`` nodes (O(n^3) time, O(n^2)
    memory); use the per-source oracles beyond that.  A negative diagonal
    entry signals a negative cycle.
    """
    n = g.n
    if n > cap:
        raise GraphSizeError(
            f"n={n} exceeds the Floyd-Warshall cap of {cap}; run a "
            "per-source oracle (Dijkstra or Bellman-Ford) instead"
        )
    mat = np.full((n, n), inf)
    np.fill_diagonal(mat, 0.0)
    if g.m:
        u = np.repeat(np.arange(n), np.diff(g.row_ptr))
        np.minimum.at(mat, (u, g.col), g.val)
    for k in range(n):
        np.minimum(mat, mat[:, k : k + 1] + mat[k : k + 1, :], out=mat)
    negative_cycle = bool(n and np.any(np.diagonal(mat) < 0))
    return FloydResult(matrix=mat, negative_cycle=negative_cycle, relaxations=n**3)
