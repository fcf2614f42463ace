"""Weighted single-source shortest paths by step-limited relaxation.

Two kernels share the same relaxation rule and differ only in which nodes
they rescan each round:

* :func:`gsvm_sssp` rescans every node whose tentative distance is finite
  (general sparse vector-matrix relaxation).
* :func:`govm_sssp` rescans only the frontier, i.e. the nodes whose
  distance was written in the previous round (the optimized variant).

Both produce identical distances on every input.  A round relaxes the
out-edges of each scanned node ``j`` in CSR order: ``dist[k]`` is
overwritten by ``dist[j] + w(j, k)`` whenever that is strictly smaller and
``k`` is not the source.  The source guard pins ``dist[source] = 0``.
Rounds stop early when nothing was written, and are hard-capped at ``n``.

Negative cycles are reported, not resolved: the ``negative_cycle`` flag is
raised either when the final permitted round still wrote (distances keep
falling, so a reachable negative cycle avoids the source) or when the
source guard blocks an edge that would push ``dist[source]`` below zero
(a negative closed walk through the source).  Together the two triggers
match Bellman-Ford's verdict for cycles reachable from the source.
Flagged distances are returned as computed but are unreliable for nodes
that can be reached from a cycle.

Per-solve counters track the work done: ``writes`` counts assignments to
the distance vector, ``first_discoveries`` counts nodes leaving the
unreachable state, and ``mu = writes / first_discoveries`` is the mean
number of times a reachable node's path was updated.  On unit-weight
graphs the frontier kernel discovers every shortest path exactly once, so
``mu == 1.0`` and ``re_updates == 0``.

Parallelism is across sources only (:func:`mssp`, :func:`apsp`); a single
solve is strictly sequential because in-round writes feed later
relaxations in the same round.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import inf
from typing import Callable, Iterable, Sequence

import numpy as np

from .graph import CsrGraph

__all__ = [
    "DistanceVector",
    "PredecessorVector",
    "FrontierFlags",
    "SolveStats",
    "AggregateStats",
    "seed_source",
    "gsvm_sssp",
    "govm_sssp",
    "mssp",
    "apsp",
    "aggregate_stats",
    "format_distance_row",
    "SOLVERS",
]


@dataclass(frozen=True, eq=False)
class DistanceVector:
    """Tentative distances from ``source``; ``inf`` marks unreachable."""

    dist: np.ndarray
    source: int


@dataclass
class PredecessorVector:
    """Shortest-path tree: ``pred[j]`` is the node that last wrote ``dist[j]``.

    ``pred[source]`` is None.  On negative-cycle-free inputs, following
    predecessors from any finite-distance node reaches the source.
    """

    pred: list[int | None]
    source: int

    def path_to(self, j: int) -> list[int] | None:
        """Nodes from source to ``j`` inclusive, or None if unreachable."""
        if j != self.source and self.pred[j] is None:
            return None
        path = [j]
        seen = {j}
        while path[-1] != self.source:
            p = self.pred[path[-1]]
            if p is None or p in seen:  # corrupt tree (negative cycle)
                return None
            seen.add(p)
            path.append(p)
        path.reverse()
        return path


@dataclass
class FrontierFlags:
    """The two frontier bitmaps of the optimized kernel.

    ``current`` marks nodes to scan this round (written last round);
    ``next`` collects nodes written this round and becomes ``current``
    when the round ends.
    """

    current: list[bool]
    next: list[bool]

    @classmethod
    def empty(cls, n: int) -> "FrontierFlags":
        return cls(current=[False] * n, next=[False] * n)


@dataclass
class SolveStats:
    """Work counters for one solve.

    ``relaxations`` counts inner-loop edge examinations, ``writes`` counts
    distance assignments, ``first_discoveries`` counts nodes whose
    distance left infinity (the source's initial 0 does not count), and
    ``re_updates = writes - first_discoveries``.  ``mu`` is writes per
    discovered node; ``updated_ratio`` is the fraction of discovered nodes
    written at least twice.
    """

    outer_steps: int = 0
    relaxations: int = 0
    writes: int = 0
    first_discoveries: int = 0
    re_updates: int = 0
    mu: float = 0.0
    updated_ratio: float = 0.0
    negative_cycle: bool = False

    def as_dict(self) -> dict:
        return {
            "outer_steps": self.outer_steps,
            "relaxations": self.relaxations,
            "writes": self.writes,
            "first_discoveries": self.first_discoveries,
            "re_updates": self.re_updates,
            "mu": self.mu,
            "updated_ratio": self.updated_ratio,
            "negative_cycle": self.negative_cycle,
        }


@dataclass
class AggregateStats:
    """Counters summed over a set of per-source solves.

    Means are taken over sources with at least one reachable node.
    """

    sources: int = 0
    reachable_sources: int = 0
    outer_steps: int = 0
    relaxations: int = 0
    writes: int = 0
    first_discoveries: int = 0
    re_updates: int = 0
    mean_mu: float = 0.0
    mean_updated_ratio: float = 0.0
    negative_cycle: bool = False

    def add(self, s: SolveStats) -> None:
        self.sources += 1
        self.outer_steps += s.outer_steps
        self.relaxations += s.relaxations
        self.writes += s.writes
        self.first_discoveries += s.first_discoveries
        self.re_updates += s.re_updates
        self.negative_cycle = self.negative_cycle or s.negative_cycle
        if s.first_discoveries > 0:
            self.reachable_sources += 1
            # running sums; turned into means by finish()
            self.mean_mu += s.mu
            self.mean_updated_ratio += s.updated_ratio

    def finish(self) -> "AggregateStats":
        if self.reachable_sources:
            self.mean_mu /= self.reachable_sources
            self.mean_updated_ratio /= self.reachable_sources
        return self

    def as_dict(self) -> dict:
        return {
            "sources": self.sources,
            "reachable_sources": self.reachable_sources,
            "outer_steps": self.outer_steps,
            "relaxations": self.relaxations,
            "writes": self.writes,
            "first_discoveries": self.first_discoveries,
            "re_updates": self.re_updates,
            "mean_mu": self.mean_mu,
            "mean_updated_ratio": self.mean_updated_ratio,
            "negative_cycle": self.negative_cycle,
        }


def aggregate_stats(stats: Iterable[SolveStats]) -> AggregateStats:
    agg = AggregateStats()
    for s in stats:
        agg.add(s)
    return agg.finish()


def seed_source(
    g: CsrGraph,
    source: int,
    alpha: list[float],
    delta: list[bool],
    stats: SolveStats | None = None,
    pred: list[int | None] | None = None,
    write_counts: list[int] | None = None,
) -> tuple[list[float], list[bool]]:
    """Round 1 of a solve: relax the source's own out-edges in place.

    Expects ``alpha`` all-infinite except ``alpha[source] == 0`` and
    ``delta`` all-false.  Each out-neighbor ``j != source`` gets
    ``alpha[j] = min(alpha[j], w)`` and ``delta[j] = True`` when written.
    A self-loop at the source is blocked by the source guard; a negative
    one is flagged as a negative cycle.
    """
    row_ptr, col, val = g.row_ptr, g.col, g.val
    for k in range(int(row_ptr[source]), int(row_ptr[source + 1])):
        idx = int(col[k])
        cand = alpha[source] + float(val[k])
        if stats is not None:
            stats.relaxations += 1
        if alpha[idx] > cand:
            if idx == source:
                if stats is not None:
                    stats.negative_cycle = True
                continue
            if stats is not None:
                if alpha[idx] == inf:
                    stats.first_discoveries += 1
                stats.writes += 1
            alpha[idx] = cand
            delta[idx] = True
            if write_counts is not None:
                write_counts[idx] += 1
            if pred is not None:
                pred[idx] = source
    return alpha, delta


def _check_source(g: CsrGraph, source: int) -> None:
    if not 0 <= source < g.n:
        raise ValueError(f"source {source} out of range for n={g.n}")


def _finalize(stats: SolveStats, write_counts: list[int]) -> None:
    stats.re_updates = stats.writes - stats.first_discoveries
    stats.mu = stats.writes / max(stats.first_discoveries, 1)
    multi = sum(1 for c in write_counts if c >= 2)
    stats.updated_ratio = multi / max(stats.first_discoveries, 1)


def gsvm_sssp(
    g: CsrGraph, source: int, record_pred: bool = False
) -> tuple[DistanceVector, PredecessorVector | None, SolveStats]:
    """SSSP by full rescans: every finite-distance node is rescanned each round."""
    _check_source(g, source)
    n = g.n
    stats = SolveStats()
    row_ptr = g.row_ptr.tolist()
    col = g.col.tolist()
    val = g.val.tolist()
    alpha = [inf] * n
    alpha[source] = 0.0
    delta = [False] * n
    write_counts = [0] * n
    pred: list[int | None] | None = [None] * n if record_pred else None
    seed_source(g, source, alpha, delta, stats=stats, pred=pred, write_counts=write_counts)

    step = 1
    wrote = False
    while step < n:
        step += 1
        wrote = False
        for j in range(n):
            if alpha[j] == inf:
                continue
            start = row_ptr[j]
            end = row_ptr[j + 1]
            if start == end:
                continue
            for k in range(start, end):
                idx = col[k]
                cand = alpha[j] + val[k]
                stats.relaxations += 1
                if alpha[idx] > cand:
                    if idx == source:
                        # guard keeps dist[source] pinned at 0; an improving
                        # edge into the source means a negative closed walk
                        stats.negative_cycle = True
                        continue
                    if alpha[idx] == inf:
                        stats.first_discoveries += 1
                    alpha[idx] = cand
                    write_counts[idx] += 1
                    stats.writes += 1
                    if pred is not None:
                        pred[idx] = j
                    wrote = True
        if not wrote:
            break

    stats.outer_steps = step
    if wrote:  # the last permitted round still wrote: distances never settled
        stats.negative_cycle = True
    _finalize(stats, write_counts)
    dv = DistanceVector(dist=np.array(alpha, dtype=np.float64), source=source)
    pv = PredecessorVector(pred=pred, source=source) if record_pred else None
    return dv, pv, stats


def govm_sssp(
    g: CsrGraph,
    source: int,
    record_pred: bool = False,
    trace: Callable[[int, list[int], list[int], list[float]], None] | None = None,
) -> tuple[DistanceVector, PredecessorVector | None, SolveStats]:
    """SSSP by frontier rescans: only nodes written last round are rescanned.

    Produces distances identical to :func:`gsvm_sssp` with no more edge
    examinations.  ``trace``, if given, is called after every round with
    ``(step, scanned_nodes, written_nodes, distance_snapshot)``; it exists
    for instrumentation tests and costs nothing when unset.
    """
    _check_source(g, source)
    n = g.n
    stats = SolveStats()
    row_ptr = g.row_ptr.tolist()
    col = g.col.tolist()
    val = g.val.tolist()
    alpha = [inf] * n
    alpha[source] = 0.0
    flags = FrontierFlags.empty(n)
    write_counts = [0] * n
    pred: list[int | None] | None = [None] * n if record_pred else None
    seed_source(
        g, source, alpha, flags.current, stats=stats, pred=pred, write_counts=write_counts
    )

    step = 1
    wrote = False
    cur = flags.current
    nxt = flags.next
    while step < n:
        step += 1
        wrote = False
        scanned: list[int] | None = [] if trace is not None else None
        for j in range(n):
            if not cur[j]:
                continue
            if scanned is not None:
                scanned.append(j)
            start = row_ptr[j]
            end = row_ptr[j + 1]
            if start == end:
                continue
            for k in range(start, end):
                idx = col[k]
                cand = alpha[j] + val[k]
                stats.relaxations += 1
                if alpha[idx] > cand:
                    if idx == source:
                        stats.negative_cycle = True
                        continue
                    if alpha[idx] == inf:
                        stats.first_discoveries += 1
                    alpha[idx] = cand
                    nxt[idx] = True
                    write_counts[idx] += 1
                    stats.writes += 1
                    if pred is not None:
                        pred[idx] = j
                    wrote = True
        if trace is not None:
            trace(step, scanned, [j for j in range(n) if nxt[j]], list(alpha))
        if not wrote:
            break
        cur, nxt = nxt, [False] * n  # promote the written set to the frontier
        flags.current, flags.next = cur, nxt

    stats.outer_steps = step
    if wrote:
        stats.negative_cycle = True
    _finalize(stats, write_counts)
    dv = DistanceVector(dist=np.array(alpha, dtype=np.float64), source=source)
    pv = PredecessorVector(pred=pred, source=source) if record_pred else None
    return dv, pv, stats


SOLVERS = {"gsvm": gsvm_sssp, "govm": govm_sssp}

_pool_graph: CsrGraph | None = None
_pool_algo: str = "govm"


def _pool_init(g: CsrGraph, algo: str) -> None:
    global _pool_graph, _pool_algo
    _pool_graph = g
    _pool_algo = algo


def _pool_solve(source: int) -> tuple[DistanceVector, SolveStats]:
    dv, _, stats = SOLVERS[_pool_algo](_pool_graph, source)
    return dv, stats


def _normalize_algo(algo: str) -> str:
    name = algo.lower()
    if name not in SOLVERS:
        raise ValueError(f"unknown solver {algo!r}; expected one of {sorted(SOLVERS)}")
    return name


def mssp(
    g: CsrGraph,
    sources: Sequence[int],
    algo: str = "govm",
    workers: int = 1,
) -> list[tuple[DistanceVector, SolveStats]]:
    """Independent SSSP solves from each source, in the given order.

    Results are bit-identical regardless of ``workers``; with more than
    one worker the solves run in separate processes over the shared
    read-only graph.
    """
    name = _normalize_algo(algo)
    if workers < 1:
        raise ValueError("workers must be >= 1")
    sources = [int(s) for s in sources]
    for s in sources:
        _check_source(g, s)

    if workers == 1 or len(sources) <= 1:
        solve = SOLVERS[name]
        out = []
        for s in sources:
            dv, _, stats = solve(g, s)
            out.append((dv, stats))
        return out

    chunk = max(1, len(sources) // (workers * 4))
    with ProcessPoolExecutor(
        max_workers=workers, initializer=_pool_init, initargs=(g, name)
    ) as ex:
        return list(ex.map(_pool_solve, sources, chunksize=chunk))


def apsp(
    g: CsrGraph,
    algo: str = "govm",
    workers: int = 1,
    sink: Callable[[DistanceVector], None] | None = None,
) -> AggregateStats:
    """SSSP from every source in ascending order, streamed to ``sink``.

    The full n x n matrix is never materialized; each row is handed to
    ``sink`` (when given) and dropped.  Returns summed counters with mean
    ``mu`` over sources that reach at least one node.  A sink failure
    aborts the run.
    """
    name = _normalize_algo(algo)
    if workers < 1:
        raise ValueError("workers must be >= 1")
    agg = AggregateStats()

    if workers == 1 or g.n <= 1:
        solve = SOLVERS[name]
        for s in range(g.n):
            dv, _, stats = solve(g, s)
            if sink is not None:
                sink(dv)
            agg.add(stats)
        return agg.finish()

    chunk = max(1, g.n // (workers * 4))
    with ProcessPoolExecutor(
        max_workers=workers, initializer=_pool_init, initargs=(g, name)
    ) as ex:
        for dv, stats in ex.map(_pool_solve, range(g.n), chunksize=chunk):
            if sink is not None:
                sink(dv)
            agg.add(stats)
    return agg.finish()


def format_distance_row(dv: DistanceVector) -> str:
    """Render ``source,d0,d1,...`` with ``inf`` for unreachable nodes.

    Finite distances use %.17g so the text round-trips to the exact float.
    """
    parts = [str(dv.source)]
    for d in dv.dist:
        parts.append("inf" if d == inf else "%.17g" % d)
    return ",".join(parts)
