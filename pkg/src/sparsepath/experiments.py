"""Path-update statistics experiments and timing benchmarks.

The central experiment pairs two runs over the same graph structure: a
baseline with every weight forced to 1.0, and a comparison with weights
drawn uniformly from [0.0, 2.0).  On the unit-weight baseline the
frontier kernel discovers each shortest path exactly once (``mu == 1``,
zero re-updates); the randomized arm measures how much extra write work
weighted inputs cause.  ``run_mu_experiment`` aggregates both arms over a
seeded sample of sources and returns a reproducible report.

``run_benchmark`` wraps any of the five algorithms with repeat timing and
a one-time correctness cross-check, and ``write_report`` serializes
report records to CSV or JSON with stable field order.
"""

from __future__ import annotations

import csv
import json
import statistics
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Sequence

import numpy as np

from .errors import GraphSizeError, NegativeWeightError
from .graph import CsrGraph, WeightMode, apply_weight_mode
from .oracles import (
    DEFAULT_FLOYD_CAP,
    bellman_ford_sssp,
    dijkstra_sssp,
    floyd_warshall_apsp,
)
from .solver import SOLVERS, AggregateStats, aggregate_stats, apsp, mssp

__all__ = [
    "MuReport",
    "BenchRecord",
    "run_mu_experiment",
    "run_benchmark",
    "write_report",
    "ALGORITHMS",
    "TASKS",
]

ALGORITHMS = ("gsvm", "govm", "dijkstra", "bellman_ford", "floyd")
TASKS = ("sssp", "mssp", "apsp")

RANDOM_WEIGHT_LO = 0.0
RANDOM_WEIGHT_HI = 2.0


@dataclass
class MuReport:
    """Paired unit-weight vs random-weight statistics for one graph.

    ``mean_mu`` and ``mean_updated_ratio`` summarize the randomized arm;
    the baseline arm must show zero re-updates by construction.
    """

    graph_id: str
    sources_sampled: int
    baseline: AggregateStats
    randomized: AggregateStats
    mean_updated_ratio: float
    mean_mu: float
    seed: int
    notes: str = ""

    def to_dict(self) -> dict:
        return {
            "graph_id": self.graph_id,
            "sources_sampled": self.sources_sampled,
            "baseline": self.baseline.as_dict(),
            "randomized": self.randomized.as_dict(),
            "mean_updated_ratio": self.mean_updated_ratio,
            "mean_mu": self.mean_mu,
            "seed": self.seed,
            "notes": self.notes,
        }

    def to_flat_dict(self) -> dict:
        flat: dict = {"graph_id": self.graph_id, "sources_sampled": self.sources_sampled}
        for prefix, agg in (("baseline", self.baseline), ("randomized", self.randomized)):
            for key, value in agg.as_dict().items():
                flat[f"{prefix}_{key}"] = value
        flat["mean_updated_ratio"] = self.mean_updated_ratio
        flat["mean_mu"] = self.mean_mu
        flat["seed"] = self.seed
        flat["notes"] = self.notes
        return flat


@dataclass
class BenchRecord:
    """One timed run: median wall seconds over ``repeats`` identical runs."""

    graph_id: str
    algorithm: str
    task: str
    workers: int
    wall_time: float
    relaxations: int
    repeats: int
    times: list[float] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "graph_id": self.graph_id,
            "algorithm": self.algorithm,
            "task": self.task,
            "workers": self.workers,
            "wall_time": self.wall_time,
            "relaxations": self.relaxations,
            "repeats": self.repeats,
            "times": list(self.times),
        }

    def to_flat_dict(self) -> dict:
        flat = self.to_dict()
        flat["times"] = ";".join("%.17g" % t for t in self.times)
        return flat


def run_mu_experiment(
    g: CsrGraph,
    num_sources: int = 64,
    seed: int = 0,
    workers: int = 1,
    graph_id: str | None = None,
) -> MuReport:
    """Run the unit-weight baseline and the U[0,2) comparison over the
    same structure from a seeded sample of sources.

    Sources are drawn uniformly without replacement; asking for more
    sources than nodes clamps to n with a note in the report.  The same
    seed drives source sampling and the random weights, so reports are
    byte-identical across runs.
    """
    if num_sources < 1:
        raise ValueError("num_sources must be >= 1")
    if g.n == 0:
        raise ValueError("cannot sample sources from an empty graph")
    notes = ""
    if num_sources > g.n:
        notes = f"requested {num_sources} sources, clamped to n={g.n}"
        num_sources = g.n
    if graph_id is None:
        graph_id = f"graph(n={g.n},m={g.m})"

    rng = np.random.default_rng(seed)
    sources = sorted(int(s) for s in rng.choice(g.n, size=num_sources, replace=False))

    unit = apply_weight_mode(g, WeightMode.unit())
    randomized = apply_weight_mode(
        g, WeightMode.random_uniform(RANDOM_WEIGHT_LO, RANDOM_WEIGHT_HI, seed=seed)
    )

    base_agg = aggregate_stats(s for _, s in mssp(unit, sources, "govm", workers))
    if base_agg.re_updates != 0:
        raise RuntimeError(
            "unit-weight baseline produced re-updates; the frontier kernel "
            "is expected to discover each path exactly once"
        )
    rand_agg = aggregate_stats(s for _, s in mssp(randomized, sources, "govm", workers))

    return MuReport(
        graph_id=graph_id,
        sources_sampled=num_sources,
        baseline=base_agg,
        randomized=rand_agg,
        mean_updated_ratio=rand_agg.mean_updated_ratio,
        mean_mu=rand_agg.mean_mu,
        seed=seed,
        notes=notes,
    )


def _bench_sources(task: str, sources: Sequence[int] | None, n: int) -> list[int]:
    if task == "apsp":
        return list(range(n))
    if not sources:
        raise ValueError(f"task {task!r} requires explicit sources")
    sources = [int(s) for s in sources]
    if task == "sssp" and len(sources) != 1:
        raise ValueError("task 'sssp' takes exactly one source")
    return sources


def _cross_check(
    g: CsrGraph, algorithm: str, result_rows: dict[int, np.ndarray], flagged: bool
) -> None:
    """Compare a few solved rows against an independent oracle once."""
    check = list(result_rows.items())[:3]
    fw = None
    if algorithm == "bellman_ford" and _find_min_weight(g) < 0:
        if g.n > DEFAULT_FLOYD_CAP:
            return  # no independent negative-weight oracle at this size
        fw = floyd_warshall_apsp(g)
    for source, row in check:
        if algorithm == "bellman_ford":
            if fw is None:
                oracle_dist = dijkstra_sssp(g, source).dist.dist
                oracle_flag = False
            else:
                oracle_dist = fw.matrix[source]
                oracle_flag = fw.negative_cycle
        else:
            oracle = bellman_ford_sssp(g, source)
            oracle_dist = oracle.dist.dist
            oracle_flag = oracle.negative_cycle
        if oracle_flag or flagged:
            continue  # unreliable distances under negative cycles
        if not np.allclose(row, oracle_dist, rtol=0.0, atol=1e-9, equal_nan=False):
            raise RuntimeError(
                f"{algorithm} disagrees with the oracle from source {source}"
            )


def _find_min_weight(g: CsrGraph) -> float:
    return float(g.val.min()) if g.m else 0.0


def run_benchmark(
    g: CsrGraph,
    algorithm: str,
    task: str,
    sources: Sequence[int] | None = None,
    workers: int = 1,
    repeats: int = 3,
    graph_id: str | None = None,
    floyd_cap: int = DEFAULT_FLOYD_CAP,
) -> BenchRecord:
    """Time ``repeats`` identical runs of one algorithm on one task.

    Incompatible pairings fail before any timing starts: Dijkstra refuses
    negative weights and Floyd-Warshall refuses graphs over the size cap.
    The first (untimed) run is cross-checked against an independent
    oracle and its distance rows are then discarded; only counters and
    wall times are kept.  ``workers`` applies to the relaxation kernels
    only; the reference algorithms always run single-threaded.
    """
    algorithm = algorithm.lower()
    task = task.lower()
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}")
    if task not in TASKS:
        raise ValueError(f"unknown task {task!r}; expected one of {TASKS}")
    if repeats < 3:
        raise ValueError("repeats must be >= 3 so the median is meaningful")
    if workers < 1:
        raise ValueError("workers must be >= 1")
    if algorithm == "dijkstra" and _find_min_weight(g) < 0:
        raise NegativeWeightError(
            "Dijkstra cannot be benchmarked on a graph with negative weights"
        )
    if algorithm == "floyd" and g.n > floyd_cap:
        raise GraphSizeError(
            f"n={g.n} exceeds the Floyd-Warshall cap of {floyd_cap}"
        )
    run_sources = _bench_sources(task, sources, g.n)
    if graph_id is None:
        graph_id = f"graph(n={g.n},m={g.m})"

    if algorithm in SOLVERS:

        def run() -> tuple[dict[int, np.ndarray], int, bool]:
            rows = {}
            total = 0
            flagged = False
            for dv, stats in mssp(g, run_sources, algorithm, workers):
                rows[dv.source] = dv.dist
                total += stats.relaxations
                flagged = flagged or stats.negative_cycle
            return rows, total, flagged

    elif algorithm == "floyd":

        def run() -> tuple[dict[int, np.ndarray], int, bool]:
            fw = floyd_warshall_apsp(g, cap=floyd_cap)
            rows = {s: fw.matrix[s] for s in run_sources[:3]}
            return rows, fw.relaxations, fw.negative_cycle

    else:
        oracle_fn = dijkstra_sssp if algorithm == "dijkstra" else bellman_ford_sssp

        def run() -> tuple[dict[int, np.ndarray], int, bool]:
            rows = {}
            total = 0
            flagged = False
            for s in run_sources:
                res = oracle_fn(g, s)
                rows[s] = res.dist.dist
                total += res.relaxations
                flagged = flagged or res.negative_cycle
            return rows, total, flagged

    rows, relaxations, flagged = run()
    _cross_check(g, algorithm, rows, flagged)
    del rows

    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        run()
        times.append(time.perf_counter() - t0)

    return BenchRecord(
        graph_id=graph_id,
        algorithm=algorithm,
        task=task,
        workers=workers if algorithm in SOLVERS else 1,
        wall_time=statistics.median(times),
        relaxations=relaxations,
        repeats=repeats,
        times=times,
    )


def _flat_value(value) -> str:
    if isinstance(value, float):
        return "%.17g" % value
    return str(value)


def write_report(records: Sequence, fmt: str, sink: str | Path | IO[str]) -> None:
    """Serialize report records to CSV or JSON with stable field order.

    CSV uses one flattened row per record and requires all records to
    share the same fields; JSON nests aggregates and round-trips exactly.
    Output is idempotent: the same records always produce the same bytes.
    """
    records = list(records)
    if not records:
        raise ValueError("no records to write")
    fmt = fmt.lower()
    if fmt not in ("csv", "json"):
        raise ValueError(f"unknown report format {fmt!r}; expected csv or json")

    if isinstance(sink, (str, Path)):
        with open(sink, "w", encoding="utf-8", newline="") as fh:
            write_report(records, fmt, fh)
        return

    if fmt == "json":
        json.dump([r.to_dict() for r in records], sink, indent=2)
        sink.write("\n")
        return

    flats = [r.to_flat_dict() for r in records]
    header = list(flats[0].keys())
    for flat in flats[1:]:
        if list(flat.keys()) != header:
            raise ValueError("CSV reports require records with identical fields")
    writer = csv.writer(sink, lineterminator="\n")
    writer.writerow(header)
    for flat in flats:
        writer.writerow([_flat_value(flat[key]) for key in header])
