"""Weighted shortest paths on CSR graphs via step-limited relaxation.

The public surface re-exports the graph containers and loaders, the two
relaxation kernels with their multi-source drivers, the classical
reference oracles, and the experiment harness.
"""

from .errors import (
    GraphParseError,
    GraphSizeError,
    NegativeWeightError,
    SparsepathError,
    UnsupportedFormatError,
)
from .experiments import (
    BenchRecord,
    MuReport,
    run_benchmark,
    run_mu_experiment,
    write_report,
)
from .graph import (
    CsrGraph,
    EdgeList,
    WeightMode,
    apply_weight_mode,
    build_csr,
    generate_random_graph,
    load_edge_list,
    load_matrix_market,
    read_graph,
    to_edge_list,
    write_edge_list,
    write_graph,
    write_matrix_market,
)
from .oracles import (
    DEFAULT_FLOYD_CAP,
    FloydResult,
    OracleResult,
    bellman_ford_sssp,
    dijkstra_sssp,
    floyd_warshall_apsp,
)
from .solver import (
    AggregateStats,
    DistanceVector,
    FrontierFlags,
    PredecessorVector,
    SolveStats,
    aggregate_stats,
    apsp,
    format_distance_row,
    govm_sssp,
    gsvm_sssp,
    mssp,
    seed_source,
)

__version__ = "0.1.0"

__all__ = [
    "SparsepathError",
    "GraphParseError",
    "UnsupportedFormatError",
    "NegativeWeightError",
    "GraphSizeError",
    "EdgeList",
    "CsrGraph",
    "WeightMode",
    "load_edge_list",
    "load_matrix_market",
    "build_csr",
    "to_edge_list",
    "write_edge_list",
    "write_matrix_market",
    "read_graph",
    "write_graph",
    "apply_weight_mode",
    "generate_random_graph",
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
    "OracleResult",
    "FloydResult",
    "dijkstra_sssp",
    "bellman_ford_sssp",
    "floyd_warshall_apsp",
    "DEFAULT_FLOYD_CAP",
    "MuReport",
    "BenchRecord",
    "run_mu_experiment",
    "run_benchmark",
    "write_report",
]
