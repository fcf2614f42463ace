"""Graph ingestion, CSR construction, and synthetic graph generation.

The package works exclusively on immutable compressed-sparse-row graphs
(:class:`CsrGraph`).  Everything here is a producer of that representation:
text loaders for the edge-list and MatrixMarket coordinate formats, the
matching writers, a weight rewriter, and a seeded random-graph generator.

Node ids are dense 0-based integers.  Weights are 64-bit floats and must be
finite.  Duplicate edges and self-loops are kept; relaxation-based solvers
naturally pick the cheapest parallel edge, and a negative self-loop is a
negative cycle that the solvers must flag.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable

import numpy as np

from .errors import GraphParseError, UnsupportedFormatError

__all__ = [
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
]


@dataclass
class EdgeList:
    """Raw directed edges before CSR construction.

    Duplicates and self-loops are permitted.  ``n`` may exceed the largest
    node id to represent trailing isolated nodes.
    """

    n: int
    edges: list[tuple[int, int, float]] = field(default_factory=list)

    def validate(self) -> None:
        if self.n < 0:
            raise ValueError(f"node count must be non-negative, got {self.n}")
        for u, v, w in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={self.n}")
            if not math.isfinite(w):
                raise ValueError(f"edge ({u}, {v}) has non-finite weight {w!r}")


@dataclass(frozen=True, eq=False)
class CsrGraph:
    """Immutable compressed-sparse-row adjacency with float64 weights.

    ``row_ptr`` has length ``n + 1`` with ``row_ptr[0] == 0`` and
    ``row_ptr[n] == m``; the out-edges of node ``u`` are
    ``col[row_ptr[u]:row_ptr[u+1]]`` with weights in the same slice of
    ``val``.  Within each row the destinations are sorted ascending, which
    makes every solver run over a given graph bit-deterministic.

    Instances are safe to share read-only across concurrent solves; the
    underlying arrays are marked non-writeable.
    """

    n: int
    m: int
    row_ptr: np.ndarray
    col: np.ndarray
    val: np.ndarray

    def __post_init__(self):
        row_ptr = np.asarray(self.row_ptr, dtype=np.int64)
        col = np.asarray(self.col, dtype=np.int64)
        val = np.asarray(self.val, dtype=np.float64)
        object.__setattr__(self, "row_ptr", row_ptr)
        object.__setattr__(self, "col", col)
        object.__setattr__(self, "val", val)
        if self.n < 0:
            raise ValueError("node count must be non-negative")
        if row_ptr.shape != (self.n + 1,):
            raise ValueError("row_ptr must have length n + 1")
        if row_ptr[0] != 0 or row_ptr[-1] != self.m:
            raise ValueError("row_ptr must start at 0 and end at m")
        if np.any(np.diff(row_ptr) < 0):
            raise ValueError("row_ptr must be monotone non-decreasing")
        if col.shape != (self.m,) or val.shape != (self.m,):
            raise ValueError("col and val must both have length m")
        if self.m and (col.min() < 0 or col.max() >= self.n):
            raise ValueError("column index out of range")
        if self.m and not np.all(np.isfinite(val)):
            raise ValueError("weights must be finite")
        for arr in (row_ptr, col, val):
            arr.flags.writeable = False

    def out_degree(self, u: int) -> int:
        return int(self.row_ptr[u + 1] - self.row_ptr[u])


@dataclass(frozen=True)
class WeightMode:
    """How to assign edge weights: keep, force 1.0, or draw uniformly.

    ``random_uniform`` draws i.i.d. from the half-open interval
    ``[lo, hi)`` with a fixed seed, so repeated application is
    reproducible.
    """

    kind: str
    lo: float = 0.0
    hi: float = 0.0
    seed: int = 0

    KEEP = "keep"
    UNIT = "unit"
    RANDOM = "random"

    @classmethod
    def keep(cls) -> "WeightMode":
        return cls(cls.KEEP)

    @classmethod
    def unit(cls) -> "WeightMode":
        return cls(cls.UNIT)

    @classmethod
    def random_uniform(cls, lo: float, hi: float, seed: int) -> "WeightMode":
        if not (lo < hi):
            raise ValueError(f"invalid weight range [{lo}, {hi}): lo must be < hi")
        return cls(cls.RANDOM, lo=lo, hi=hi, seed=seed)


def _parse_int(token: str, line: int, what: str) -> int:
    try:
        value = int(token)
    except ValueError:
        raise GraphParseError(f"expected integer {what}, got {token!r}", line) from None
    if value < 0:
        raise GraphParseError(f"{what} must be non-negative, got {value}", line)
    return value


def _parse_weight(token: str, line: int) -> float:
    try:
        w = float(token)
    except ValueError:
        raise GraphParseError(f"expected numeric weight, got {token!r}", line) from None
    if not math.isfinite(w):
        raise GraphParseError(f"non-finite weight {token!r} rejected", line)
    return w


def load_edge_list(stream: Iterable[str], directed: bool = True) -> EdgeList:
    """Parse whitespace-separated ``u v [w]`` lines into an EdgeList.

    Lines starting with ``%`` or ``#`` are comments.  A missing weight
    defaults to 1.0.  With ``directed=False`` every edge is emitted in both
    directions (self-loops twice).

    An optional bare header line ``n m`` is recognized at the top of the
    file.  Because a two-token line is also a valid weightless edge, the
    first non-comment line is treated as a header only when its second
    token equals the number of remaining edge lines and its first token
    covers every node id that follows; otherwise it is read as an edge.
    Files produced by :func:`write_edge_list` always round-trip.
    """
    rows: list[tuple[int, list[str]]] = []
    for lineno, raw in enumerate(stream, start=1):
        text = raw.strip()
        if not text or text[0] in "%#":
            continue
        tokens = text.split()
        if len(tokens) not in (2, 3):
            raise GraphParseError(
                f"expected 'u v [w]', got {len(tokens)} fields", lineno
            )
        rows.append((lineno, tokens))

    start = 0
    header_n: int | None = None
    if rows and len(rows[0][1]) == 2:
        lineno, tokens = rows[0]
        try:
            cand_n, cand_m = int(tokens[0]), int(tokens[1])
        except ValueError:
            cand_n = cand_m = -1
        if cand_n >= 0 and cand_m == len(rows) - 1:
            max_id = -1
            for _, toks in rows[1:]:
                try:
                    max_id = max(max_id, int(toks[0]), int(toks[1]))
                except ValueError:
                    max_id = cand_n + 1  # not edges after all; let parsing fail below
                    break
            if cand_n >= max_id + 1:
                header_n = cand_n
                start = 1

    edges: list[tuple[int, int, float]] = []
    max_id = -1
    for lineno, tokens in rows[start:]:
        u = _parse_int(tokens[0], lineno, "node id")
        v = _parse_int(tokens[1], lineno, "node id")
        w = _parse_weight(tokens[2], lineno) if len(tokens) == 3 else 1.0
        max_id = max(max_id, u, v)
        edges.append((u, v, w))
        if not directed:
            edges.append((v, u, w))

    n = header_n if header_n is not None else max_id + 1
    return EdgeList(n=n, edges=edges)


def load_matrix_market(stream: Iterable[str]) -> EdgeList:
    """Parse a MatrixMarket coordinate stream into an EdgeList.

    Supports ``real`` and ``pattern`` fields with ``general`` or
    ``symmetric`` symmetry.  Pattern entries get weight 1.0.  Symmetric
    off-diagonal entries are emitted in both directions.  Indices are
    converted from 1-based to 0-based and ``n = max(rows, cols)``.
    """
    it = iter(stream)
    try:
        banner = next(it)
    except StopIteration:
        raise GraphParseError("empty stream, missing MatrixMarket banner", 1) from None
    parts = banner.strip().split()
    if len(parts) != 5 or parts[0].lower() != "%%matrixmarket":
        raise GraphParseError("missing '%%MatrixMarket' banner", 1)
    obj, fmt, fld, sym = (p.lower() for p in parts[1:])
    if obj != "matrix" or fmt != "coordinate":
        raise UnsupportedFormatError(
            f"unsupported MatrixMarket variant '{obj} {fmt}': "
            "only 'matrix coordinate' is handled"
        )
    if fld not in ("real", "pattern"):
        raise UnsupportedFormatError(
            f"unsupported MatrixMarket field '{fld}': only real/pattern are handled"
        )
    if sym not in ("general", "symmetric"):
        raise UnsupportedFormatError(
            f"unsupported MatrixMarket symmetry '{sym}': "
            "only general/symmetric are handled"
        )

    want_weight = fld == "real"
    size: tuple[int, int, int] | None = None
    edges: list[tuple[int, int, float]] = []
    seen = 0
    for lineno, raw in enumerate(it, start=2):
        text = raw.strip()
        if not text or text.startswith("%"):
            continue
        tokens = text.split()
        if size is None:
            if len(tokens) != 3:
                raise GraphParseError("size line must be 'rows cols nnz'", lineno)
            rows_ = _parse_int(tokens[0], lineno, "row count")
            cols_ = _parse_int(tokens[1], lineno, "column count")
            nnz = _parse_int(tokens[2], lineno, "entry count")
            size = (rows_, cols_, nnz)
            continue
        rows_, cols_, nnz = size
        expected = 3 if want_weight else 2
        if len(tokens) != expected:
            raise GraphParseError(
                f"expected {expected} fields per entry, got {len(tokens)}", lineno
            )
        i = _parse_int(tokens[0], lineno, "row index")
        j = _parse_int(tokens[1], lineno, "column index")
        if not (1 <= i <= rows_ and 1 <= j <= cols_):
            raise GraphParseError(
                f"entry ({i}, {j}) outside declared {rows_} x {cols_} bounds", lineno
            )
        w = _parse_weight(tokens[2], lineno) if want_weight else 1.0
        seen += 1
        if seen > nnz:
            raise GraphParseError(f"more than the declared {nnz} entries", lineno)
        u, v = i - 1, j - 1
        edges.append((u, v, w))
        if sym == "symmetric" and u != v:
            edges.append((v, u, w))

    if size is None:
        raise GraphParseError("missing size line")
    if seen != size[2]:
        raise GraphParseError(f"declared {size[2]} entries but found {seen}")
    return EdgeList(n=max(size[0], size[1]), edges=edges)


def build_csr(el: EdgeList) -> CsrGraph:
    """Build the canonical CSR form: rows sorted by destination, ties kept
    in input order.  Duplicate edges are preserved."""
    el.validate()
    n, m = el.n, len(el.edges)
    if m == 0:
        return CsrGraph(
            n=n,
            m=0,
            row_ptr=np.zeros(n + 1, dtype=np.int64),
            col=np.empty(0, dtype=np.int64),
            val=np.empty(0, dtype=np.float64),
        )
    u = np.fromiter((e[0] for e in el.edges), dtype=np.int64, count=m)
    v = np.fromiter((e[1] for e in el.edges), dtype=np.int64, count=m)
    w = np.fromiter((e[2] for e in el.edges), dtype=np.float64, count=m)
    order = np.lexsort((v, u))  # stable: row, then col, then input order
    counts = np.bincount(u, minlength=n)
    row_ptr = np.concatenate(([0], np.cumsum(counts)))
    return CsrGraph(n=n, m=m, row_ptr=row_ptr, col=v[order], val=w[order])


def to_edge_list(g: CsrGraph) -> EdgeList:
    """Flatten a CSR graph back to an EdgeList in row-major order.

    Rebuilding the result with :func:`build_csr` reproduces the input
    arrays exactly (CSR order is already canonical).
    """
    edges = []
    row_ptr, col, val = g.row_ptr, g.col, g.val
    for u in range(g.n):
        for k in range(row_ptr[u], row_ptr[u + 1]):
            edges.append((u, int(col[k]), float(val[k])))
    return EdgeList(n=g.n, edges=edges)


def write_edge_list(g: CsrGraph, fh: IO[str]) -> None:
    """Write ``n m`` header plus one ``u v w`` line per edge."""
    fh.write(f"{g.n} {g.m}\n")
    row_ptr, col, val = g.row_ptr, g.col, g.val
    for u in range(g.n):
        for k in range(row_ptr[u], row_ptr[u + 1]):
            fh.write("%d %d %.17g\n" % (u, col[k], val[k]))


def write_matrix_market(g: CsrGraph, fh: IO[str]) -> None:
    """Write a 'matrix coordinate real general' file with 1-based indices."""
    fh.write("%%MatrixMarket matrix coordinate real general\n")
    fh.write(f"{g.n} {g.n} {g.m}\n")
    row_ptr, col, val = g.row_ptr, g.col, g.val
    for u in range(g.n):
        for k in range(row_ptr[u], row_ptr[u + 1]):
            fh.write("%d %d %.17g\n" % (u + 1, col[k] + 1, val[k]))


def _infer_format(path: Path) -> str:
    return "mtx" if path.suffix.lower() in (".mtx", ".mm") else "edgelist"


def read_graph(path: str | Path, fmt: str | None = None, directed: bool = True) -> CsrGraph:
    """Load a graph file as CSR; format inferred from the extension unless given."""
    path = Path(path)
    fmt = fmt or _infer_format(path)
    with open(path, "r", encoding="utf-8") as fh:
        if fmt == "mtx":
            el = load_matrix_market(fh)
        elif fmt == "edgelist":
            el = load_edge_list(fh, directed=directed)
        else:
            raise ValueError(f"unknown graph format {fmt!r}")
    return build_csr(el)


def write_graph(g: CsrGraph, path: str | Path, fmt: str | None = None) -> None:
    """Write a graph file; format inferred from the extension unless given."""
    path = Path(path)
    fmt = fmt or _infer_format(path)
    with open(path, "w", encoding="utf-8") as fh:
        if fmt == "mtx":
            write_matrix_market(g, fh)
        elif fmt == "edgelist":
            write_edge_list(g, fh)
        else:
            raise ValueError(f"unknown graph format {fmt!r}")


def apply_weight_mode(g: CsrGraph, mode: WeightMode) -> CsrGraph:
    """Rewrite edge weights per the mode, leaving the structure untouched."""
    if mode.kind == WeightMode.KEEP:
        return g
    if mode.kind == WeightMode.UNIT:
        val = np.ones(g.m, dtype=np.float64)
    elif mode.kind == WeightMode.RANDOM:
        if not (mode.lo < mode.hi):
            raise ValueError(f"invalid weight range [{mode.lo}, {mode.hi})")
        rng = np.random.default_rng(mode.seed)
        val = rng.uniform(mode.lo, mode.hi, size=g.m)
    else:
        raise ValueError(f"unknown weight mode {mode.kind!r}")
    return CsrGraph(n=g.n, m=g.m, row_ptr=g.row_ptr, col=g.col, val=val)


def generate_random_graph(
    n: int, avg_degree: float, mode: WeightMode, seed: int
) -> CsrGraph:
    """Directed Erdos-Renyi style graph with expected out-degree ``avg_degree``.

    Each ordered pair (u, v), u != v, is an edge with probability
    ``avg_degree / max(n - 1, 1)``.  Base weights are 1.0 before ``mode``
    is applied, so ``keep`` yields a unit-weight graph.  Deterministic for
    a fixed ``(n, seed)``.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if avg_degree < 0:
        raise ValueError("avg_degree must be non-negative")
    if n == 0:
        return build_csr(EdgeList(n=0))

    p = avg_degree / max(n - 1, 1)
    if p > 1.0:
        warnings.warn(
            f"avg_degree {avg_degree} exceeds n-1={n - 1}; clamping edge "
            "probability to 1",
            stacklevel=2,
        )
        p = 1.0

    rng = np.random.default_rng(seed)
    row_targets: list[np.ndarray] = []
    for u in range(n):
        k = int(rng.binomial(n - 1, p)) if n > 1 else 0
        if k == 0:
            row_targets.append(np.empty(0, dtype=np.int64))
            continue
        chosen: set[int] = set()
        while len(chosen) < k:
            draw = rng.integers(0, n - 1, size=2 * (k - len(chosen)))
            for t in draw:
                t = int(t)
                chosen.add(t + 1 if t >= u else t)  # skip the self-loop slot
                if len(chosen) == k:
                    break
        row_targets.append(np.sort(np.fromiter(chosen, dtype=np.int64, count=k)))

    counts = np.fromiter((len(t) for t in row_targets), dtype=np.int64, count=n)
    row_ptr = np.concatenate(([0], np.cumsum(counts)))
    m = int(row_ptr[-1])
    col = np.concatenate(row_targets) if m else np.empty(0, dtype=np.int64)
    g = CsrGraph(n=n, m=m, row_ptr=row_ptr, col=col, val=np.ones(m, dtype=np.float64))
    return apply_weight_mode(g, mode)
