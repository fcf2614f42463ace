"""Command-line interface.

Subcommands: ``sssp``, ``mssp``, ``apsp`` (distance rows), ``mu`` and
``bench`` (experiment reports), and ``convert`` (edge-list <-> MatrixMarket).

Exit codes:

* 0: success
* 1: runtime failure (unreadable input, incompatible algorithm, ...)
* 2: usage error (bad flags or flag combinations)
* 3: a negative cycle was detected and ``--allow-negative-cycles`` was
  not given; distances were still written but are unreliable

``SPARSEPATH_WORKERS`` and ``SPARSEPATH_SEED`` override the defaults for
``--workers`` and ``--seed``; explicit flags always win.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from math import inf
from typing import IO, Iterator

from .errors import SparsepathError
from .experiments import run_benchmark, run_mu_experiment, write_report
from .graph import (
    CsrGraph,
    WeightMode,
    apply_weight_mode,
    read_graph,
    write_graph,
)
from .oracles import DEFAULT_FLOYD_CAP, bellman_ford_sssp, dijkstra_sssp, floyd_warshall_apsp
from .solver import DistanceVector, apsp, format_distance_row, mssp

import numpy as np

__all__ = ["RunConfig", "parse_args", "run", "main"]

SOLVE_COMMANDS = ("sssp", "mssp", "apsp")

WORKERS_ENV = "SPARSEPATH_WORKERS"
SEED_ENV = "SPARSEPATH_SEED"


@dataclass
class RunConfig:
    """Fully validated invocation; produced by :func:`parse_args`."""

    command: str
    input: str | None
    fmt: str | None
    directed: bool
    algorithm: str
    source_spec: tuple | None  # ("list", [ids]) | ("count", k) | ("all",)
    weight_mode: WeightMode
    workers: int
    output: str | None
    output_format: str
    seed: int
    floyd_cap: int
    allow_negative_cycles: bool
    repeats: int


def _env_int(name: str, fallback: int, error) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return fallback
    try:
        return int(raw)
    except ValueError:
        error(f"environment variable {name} must be an integer, got {raw!r}")
        raise AssertionError  # error() exits


def _parse_weights(text: str, seed: int, error) -> WeightMode:
    if text == "keep":
        return WeightMode.keep()
    if text == "unit":
        return WeightMode.unit()
    if text.startswith("random:"):
        parts = text.split(":")
        if len(parts) != 3:
            error(f"--weights {text!r} must look like random:LO:HI")
        try:
            lo, hi = float(parts[1]), float(parts[2])
        except ValueError:
            error(f"--weights {text!r} has non-numeric bounds")
        if not lo < hi:
            error(f"--weights {text!r}: LO must be < HI")
        return WeightMode.random_uniform(lo, hi, seed=seed)
    error(f"--weights {text!r} must be keep, unit, or random:LO:HI")
    raise AssertionError


def _parse_source_spec(text: str, error) -> tuple:
    if text == "all":
        return ("all",)
    if "," in text:
        try:
            ids = [int(tok) for tok in text.split(",") if tok != ""]
        except ValueError:
            error(f"--sources {text!r} must be a comma-separated id list")
        if not ids or any(s < 0 for s in ids):
            error(f"--sources {text!r} must list non-negative node ids")
        return ("list", ids)
    try:
        count = int(text)
    except ValueError:
        error(f"--sources {text!r} must be a count, a comma-separated list, or 'all'")
    if count < 1:
        error(f"--sources {text!r}: count must be >= 1")
    return ("count", count)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sparsepath",
        description="Weighted shortest paths on CSR graphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("-i", "--input", required=True, help="graph file to load")
        p.add_argument(
            "--format",
            choices=["edgelist", "mtx"],
            help="input format (default: inferred from the file extension)",
        )
        d = p.add_mutually_exclusive_group()
        d.add_argument(
            "--directed",
            dest="directed",
            action="store_true",
            default=True,
            help="treat edge-list input as directed (default)",
        )
        d.add_argument(
            "--undirected",
            dest="directed",
            action="store_false",
            help="emit both directions for every edge-list line",
        )
        p.add_argument(
            "--weights",
            default="keep",
            metavar="MODE",
            help="keep, unit, or random:LO:HI (seeded by --seed)",
        )
        p.add_argument("--workers", type=int, help=f"parallel solves (env {WORKERS_ENV})")
        p.add_argument("-o", "--output", help="output file (default: stdout)")
        p.add_argument(
            "--output-format",
            choices=["rows", "csv", "json"],
            help="rows is the default for solves, csv for reports",
        )
        p.add_argument("--seed", type=int, help=f"RNG seed (env {SEED_ENV}, default 0)")

    def solve_flags(p: argparse.ArgumentParser, algos: list[str]) -> None:
        p.add_argument("-a", "--algorithm", choices=algos, default="govm")
        p.add_argument(
            "--allow-negative-cycles",
            action="store_true",
            help="exit 0 instead of 3 when a negative cycle is flagged",
        )

    p = sub.add_parser("sssp", help="single-source distances")
    common(p)
    solve_flags(p, ["govm", "gsvm", "dijkstra", "bellman_ford"])
    p.add_argument("--source", type=int, required=True, help="source node id")

    p = sub.add_parser("mssp", help="distances from several sources")
    common(p)
    solve_flags(p, ["govm", "gsvm", "dijkstra", "bellman_ford"])
    p.add_argument(
        "--sources",
        required=True,
        metavar="SPEC",
        help="comma-separated ids, a count to sample with --seed, or 'all'",
    )

    p = sub.add_parser("apsp", help="distances from every source")
    common(p)
    solve_flags(p, ["govm", "gsvm", "dijkstra", "bellman_ford", "floyd"])
    p.add_argument("--floyd-cap", type=int, default=DEFAULT_FLOYD_CAP)

    p = sub.add_parser("mu", help="unit vs random weight path-update experiment")
    common(p)
    p.add_argument(
        "--sources",
        default="64",
        metavar="SPEC",
        help="number of sources to sample (or 'all'); default 64",
    )

    p = sub.add_parser("bench", help="repeat-timed runs with a correctness check")
    common(p)
    p.add_argument(
        "-a",
        "--algorithm",
        choices=["govm", "gsvm", "dijkstra", "bellman_ford", "floyd"],
        default="govm",
    )
    p.add_argument("--source", type=int, help="bench an SSSP task from this source")
    p.add_argument(
        "--sources",
        metavar="SPEC",
        help="bench an MSSP task (list, count, or 'all'); omit for APSP",
    )
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--floyd-cap", type=int, default=DEFAULT_FLOYD_CAP)

    p = sub.add_parser("convert", help="rewrite a graph file in another format")
    common(p)

    return parser


def parse_args(argv: list[str]) -> RunConfig:
    """Parse and validate argv into a RunConfig; exits with code 2 on misuse."""
    parser = _build_parser()
    ns = parser.parse_args(argv)
    error = parser.error

    seed = ns.seed if ns.seed is not None else _env_int(SEED_ENV, 0, error)
    workers = (
        ns.workers
        if ns.workers is not None
        else _env_int(WORKERS_ENV, os.cpu_count() or 1, error)
    )
    if workers < 1:
        error("--workers must be >= 1")

    weight_mode = _parse_weights(ns.weights, seed, error)
    algorithm = getattr(ns, "algorithm", "govm")
    if (
        algorithm == "dijkstra"
        and weight_mode.kind == WeightMode.RANDOM
        and weight_mode.lo < 0
    ):
        error(
            f"--algorithm dijkstra cannot take --weights {ns.weights!r}: "
            "negative weights are outside Dijkstra's domain"
        )

    source_spec: tuple | None = None
    if ns.command == "sssp":
        if ns.source < 0:
            error("--source must be a non-negative node id")
        source_spec = ("list", [ns.source])
    elif ns.command == "mssp":
        source_spec = _parse_source_spec(ns.sources, error)
    elif ns.command == "apsp":
        source_spec = ("all",)
    elif ns.command == "mu":
        source_spec = _parse_source_spec(ns.sources, error)
        if source_spec[0] == "list":
            error("mu samples sources itself; pass a count or 'all', not a list")
    elif ns.command == "bench":
        if ns.source is not None and ns.sources is not None:
            error("pass either --source or --sources, not both")
        if ns.source is not None:
            if ns.source < 0:
                error("--source must be a non-negative node id")
            source_spec = ("list", [ns.source])
        elif ns.sources is not None:
            source_spec = _parse_source_spec(ns.sources, error)
        else:
            source_spec = ("all",)

    repeats = getattr(ns, "repeats", 3)
    if ns.command == "bench" and repeats < 3:
        error("--repeats must be >= 3")

    output_format = ns.output_format
    if output_format is None:
        output_format = "rows" if ns.command in SOLVE_COMMANDS else "csv"
    if ns.command in ("mu", "bench") and output_format == "rows":
        error(f"--output-format rows does not apply to {ns.command} reports")
    if ns.command == "convert" and ns.output is None:
        error("convert requires -o/--output")

    return RunConfig(
        command=ns.command,
        input=ns.input,
        fmt=ns.format,
        directed=ns.directed,
        algorithm=algorithm,
        source_spec=source_spec,
        weight_mode=weight_mode,
        workers=workers,
        output=ns.output,
        output_format=output_format,
        seed=seed,
        floyd_cap=getattr(ns, "floyd_cap", DEFAULT_FLOYD_CAP),
        allow_negative_cycles=getattr(ns, "allow_negative_cycles", False),
        repeats=repeats,
    )


def _resolve_sources(spec: tuple, n: int, seed: int) -> list[int]:
    kind = spec[0]
    if kind == "all":
        return list(range(n))
    if kind == "list":
        return list(spec[1])
    count = min(spec[1], n)
    rng = np.random.default_rng(seed)
    return sorted(int(s) for s in rng.choice(n, size=count, replace=False))


class _RowWriter:
    """Streams distance rows to a text sink without buffering them all.

    ``rows`` is one comma-separated line per source, ``csv`` prepends a
    header, and ``json`` emits an array of ``{"source", "distances"}``
    objects with ``null`` for unreachable nodes.
    """

    def __init__(self, fh: IO[str], fmt: str, n: int):
        self.fh = fh
        self.fmt = fmt
        self.count = 0
        if fmt == "csv":
            fh.write("source," + ",".join(f"dist_{j}" for j in range(n)) + "\n")

    def add(self, dv: DistanceVector) -> None:
        if self.fmt == "json":
            entry = {
                "source": dv.source,
                "distances": [None if d == inf else float(d) for d in dv.dist],
            }
            self.fh.write("[\n" if self.count == 0 else ",\n")
            self.fh.write(json.dumps(entry))
        else:
            self.fh.write(format_distance_row(dv) + "\n")
        self.count += 1

    def finish(self) -> None:
        if self.fmt == "json":
            self.fh.write("[]\n" if self.count == 0 else "\n]\n")


def _solve_rows(
    g: CsrGraph, cfg: RunConfig, sources: list[int]
) -> Iterator[tuple[DistanceVector, bool]]:
    """Yield (row, negative_cycle_flag) per source, in the given order."""
    if cfg.algorithm in ("govm", "gsvm"):
        for dv, stats in mssp(g, sources, cfg.algorithm, cfg.workers):
            yield dv, stats.negative_cycle
    elif cfg.algorithm == "floyd":
        fw = floyd_warshall_apsp(g, cap=cfg.floyd_cap)
        for s in sources:
            yield DistanceVector(dist=fw.matrix[s], source=s), fw.negative_cycle
    else:
        solve = dijkstra_sssp if cfg.algorithm == "dijkstra" else bellman_ford_sssp
        for s in sources:
            res = solve(g, s)
            yield res.dist, res.negative_cycle


def _dispatch(cfg: RunConfig, fh: IO[str]) -> int:
    g = read_graph(cfg.input, cfg.fmt, cfg.directed)
    g = apply_weight_mode(g, cfg.weight_mode)

    if cfg.command == "convert":
        write_graph(g, cfg.output)
        return 0

    if cfg.command == "mu":
        if cfg.source_spec[0] == "all":
            num_sources = max(g.n, 1)
        else:
            num_sources = cfg.source_spec[1]
        report = run_mu_experiment(
            g, num_sources=num_sources, seed=cfg.seed, workers=cfg.workers,
            graph_id=str(cfg.input),
        )
        write_report([report], cfg.output_format, fh)
        return 0

    if cfg.command == "bench":
        kind = cfg.source_spec[0]
        task = "apsp" if kind == "all" else ("sssp" if kind == "list" and len(cfg.source_spec[1]) == 1 else "mssp")
        sources = None if task == "apsp" else _resolve_sources(cfg.source_spec, g.n, cfg.seed)
        record = run_benchmark(
            g,
            cfg.algorithm,
            task,
            sources=sources,
            workers=cfg.workers,
            repeats=cfg.repeats,
            graph_id=str(cfg.input),
            floyd_cap=cfg.floyd_cap,
        )
        write_report([record], cfg.output_format, fh)
        return 0

    # sssp / mssp / apsp
    writer = _RowWriter(fh, cfg.output_format, g.n)
    if cfg.command == "apsp" and cfg.algorithm in ("govm", "gsvm"):
        # rows arrive in ascending source order and are written as they come
        agg = apsp(g, cfg.algorithm, cfg.workers, sink=writer.add)
        flagged = agg.negative_cycle
    else:
        flagged = False
        sources = _resolve_sources(cfg.source_spec, g.n, cfg.seed)
        for dv, flag in _solve_rows(g, cfg, sources):
            writer.add(dv)
            flagged = flagged or flag
    writer.finish()
    fh.flush()
    if flagged and not cfg.allow_negative_cycles:
        print(
            "sparsepath: negative cycle detected; distances are unreliable "
            "(pass --allow-negative-cycles to accept them)",
            file=sys.stderr,
        )
        return 3
    return 0


def run(cfg: RunConfig) -> int:
    """Execute a validated config; returns the process exit code."""
    try:
        if cfg.output is not None and cfg.command != "convert":
            with open(cfg.output, "w", encoding="utf-8", newline="") as fh:
                return _dispatch(cfg, fh)
        return _dispatch(cfg, sys.stdout)
    except (SparsepathError, OSError, ValueError, RuntimeError) as exc:
        print(f"sparsepath: error: {exc}", file=sys.stderr)
        return 1


def main(argv: list[str] | None = None) -> int:
    cfg = parse_args(sys.argv[1:] if argv is None else argv)
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
