"""Weighted undirected graphs, Laplacians, toy datasets and file loaders.

Edge-list format
----------------
One edge per line, whitespace separated::

    # nodes: 5
    0 1 2.5
    1 2          # weight defaults to 1.0

Indices are 0-based. ``#`` starts a comment. The optional ``# nodes: N``
header fixes the node count (otherwise ``max index + 1``), which lets a file
carry trailing isolated nodes. Repeated ``(i, j)`` lines are summed; if both
``(i, j)`` and ``(j, i)`` are present the larger weight is kept.

MatrixMarket
------------
``%%MatrixMarket matrix coordinate {real,integer,pattern} {symmetric,general}``
with 1-based indices. Pattern entries get weight 1. ``general`` matrices are
symmetrized with the same max rule as edge lists.
"""

import enum
import re
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.spatial import cKDTree

from .errors import (AsymmetricInput, EmptyGraph, IndexOutOfRange,
                     NegativeWeight, ParseError)

__all__ = [
    "SparseGraph", "Laplacian", "LaplacianKind", "build_laplacian",
    "degree_distribution", "uniform_distribution",
    "two_moons", "concentric_circles", "make_two_moons_knn", "make_knn_graph",
    "make_rbf_graph", "load_edge_list", "load_matrix_market", "write_edge_list",
    "load_labels", "write_labels",
]

# two-moons geometry: unit half circles, the lower one shifted by (1, 0.5)
MOON_RADIUS = 1.0
MOON_SHIFT = (1.0, 0.5)
# concentric circles: outer radius 1, inner radius CIRCLE_FACTOR
CIRCLE_FACTOR = 0.5


@dataclass(frozen=True, eq=False)
class SparseGraph:
    """Symmetric nonnegative weighted adjacency stored as CSR.

    Use :meth:`from_edges` or :meth:`from_dense` rather than the raw
    constructor unless the matrix is already canonical.
    """

    adjacency: sp.csr_matrix

    def __post_init__(self):
        W = sp.csr_matrix(self.adjacency, dtype=np.float64)
        if W.shape[0] != W.shape[1]:
            raise AsymmetricInput(f"adjacency must be square, got {W.shape}")
        W.sum_duplicates()
        W.eliminate_zeros()
        W.sort_indices()
        if W.nnz and W.data.min() < 0:
            raise NegativeWeight("edge weights must be nonnegative")
        if not np.all(np.isfinite(W.data)):
            raise NegativeWeight("edge weights must be finite")
        if (W != W.T).nnz:
            raise AsymmetricInput("adjacency is not exactly symmetric")
        object.__setattr__(self, "adjacency", W)

    @classmethod
    def from_edges(cls, n, rows, cols, weights=None, symmetrize=True):
        """Build from directed triplets; duplicates are summed.

        With ``symmetrize`` the result is ``max(W, W.T)``, so passing each
        undirected edge once is enough.
        """
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        if weights is None:
            weights = np.ones(len(rows))
        weights = np.asarray(weights, dtype=np.float64)
        if len(rows) and (min(rows.min(), cols.min()) < 0
                          or max(rows.max(), cols.max()) >= n):
            raise IndexOutOfRange(f"edge index outside [0, {n})")
        if weights.size and weights.min() < 0:
            raise NegativeWeight("edge weights must be nonnegative")
        W = sp.coo_matrix((weights, (rows, cols)), shape=(n, n)).tocsr()
        W.sum_duplicates()
        if symmetrize:
            W = W.maximum(W.T)
        return cls(W)

    @classmethod
    def from_dense(cls, W):
        W = np.asarray(W, dtype=np.float64)
        return cls(sp.csr_matrix(W))

    @property
    def n(self):
        return self.adjacency.shape[0]

    @property
    def degrees(self):
        return np.asarray(self.adjacency.sum(axis=1)).ravel()

    @property
    def num_edges(self):
        """Undirected edge count (a self-loop counts once)."""
        upper = sp.triu(self.adjacency)
        return int(upper.nnz)

    def edges(self):
        """``(i, j, w)`` arrays with ``i <= j``, one row per undirected edge."""
        upper = sp.triu(self.adjacency).tocoo()
        order = np.lexsort((upper.col, upper.row))
        return upper.row[order], upper.col[order], upper.data[order]

    def to_dense(self):
        return self.adjacency.toarray()

    def __repr__(self):
        return f"SparseGraph(n={self.n}, edges={self.num_edges})"


class LaplacianKind(str, enum.Enum):
    UNNORMALIZED = "unnormalized"
    SYM = "sym"


@dataclass(frozen=True, eq=False)
class Laplacian:
    kind: LaplacianKind
    matrix: sp.csr_matrix
    degrees: np.ndarray = field(repr=False)

    @property
    def n(self):
        return self.matrix.shape[0]

    def __matmul__(self, X):
        return self.matrix @ X


def build_laplacian(g, kind=LaplacianKind.SYM):
    """Graph Laplacian ``D - W`` or ``I - D^{-1/2} W D^{-1/2}``.

    Under the symmetric normalization an isolated node gets an identity row
    and a warning is emitted.
    """
    kind = LaplacianKind(kind)
    W = g.adjacency
    d = g.degrees
    if kind is LaplacianKind.UNNORMALIZED:
        L = sp.diags(d) - W
        return Laplacian(kind, sp.csr_matrix(L), d)
    isolated = d <= 0
    if isolated.any():
        warnings.warn(f"{int(isolated.sum())} isolated node(s): using identity "
                      "rows in the normalized Laplacian", RuntimeWarning,
                      stacklevel=2)
    inv_sqrt = np.zeros_like(d)
    inv_sqrt[~isolated] = 1.0 / np.sqrt(d[~isolated])
    Dm = sp.diags(inv_sqrt)
    L = sp.identity(g.n, format="csr") - Dm @ W @ Dm
    return Laplacian(kind, sp.csr_matrix(L), d)


def degree_distribution(g):
    """Node degrees divided by the total degree."""
    d = g.degrees
    total = d.sum()
    if total <= 0:
        raise EmptyGraph("graph has zero total weight")
    p = d / total
    return p / p.sum()


def uniform_distribution(n):
    return np.full(n, 1.0 / n)


# toy data -----------------------------------------------------------------

def two_moons(n, noise=0.05, seed=0):
    """Interleaving half circles. Returns ``(points, labels)``.

    The first ``n // 2`` points form the upper moon (label 0).
    """
    if n < 4:
        raise ValueError("two_moons needs n >= 4")
    rng = np.random.default_rng(seed)
    n_out = n // 2
    n_in = n - n_out
    t_out = np.linspace(0, np.pi, n_out)
    t_in = np.linspace(0, np.pi, n_in)
    upper = MOON_RADIUS * np.c_[np.cos(t_out), np.sin(t_out)]
    lower = np.c_[MOON_SHIFT[0] - MOON_RADIUS * np.cos(t_in),
                  MOON_SHIFT[1] - MOON_RADIUS * np.sin(t_in)]
    points = np.vstack([upper, lower])
    points += noise * rng.standard_normal(points.shape)
    labels = np.r_[np.zeros(n_out, int), np.ones(n_in, int)]
    return points, labels


def concentric_circles(n, noise=0.05, seed=0, factor=CIRCLE_FACTOR):
    """Two concentric circles; the outer one (label 0) has radius 1."""
    if n < 4:
        raise ValueError("concentric_circles needs n >= 4")
    rng = np.random.default_rng(seed)
    n_out = n // 2
    n_in = n - n_out
    t_out = np.linspace(0, 2 * np.pi, n_out, endpoint=False)
    t_in = np.linspace(0, 2 * np.pi, n_in, endpoint=False)
    outer = np.c_[np.cos(t_out), np.sin(t_out)]
    inner = factor * np.c_[np.cos(t_in), np.sin(t_in)]
    points = np.vstack([outer, inner])
    points += noise * rng.standard_normal(points.shape)
    labels = np.r_[np.zeros(n_out, int), np.ones(n_in, int)]
    return points, labels


def make_knn_graph(points, k_neighbors):
    """Unit-weight k-NN graph; an edge is kept if either endpoint picks it."""
    points = np.asarray(points, dtype=np.float64)
    n = len(points)
    if k_neighbors < 1:
        raise ValueError("k_neighbors must be >= 1")
    k = min(k_neighbors, n - 1)
    _, idx = cKDTree(points).query(points, k=k + 1)
    rows, cols = [], []
    for i in range(n):
        nbrs = [j for j in idx[i] if j != i][:k]
        rows.extend([i] * len(nbrs))
        cols.extend(nbrs)
    return SparseGraph.from_edges(n, rows, cols, symmetrize=True)


def make_two_moons_knn(n=300, noise=0.05, k_neighbors=10, seed=0,
                       return_labels=False):
    points, labels = two_moons(n, noise, seed)
    g = make_knn_graph(points, k_neighbors)
    return (g, labels) if return_labels else g


def make_rbf_graph(points, gamma):
    """Dense graph with ``w_ij = exp(-gamma * |p_i - p_j|^2)`` and no loops."""
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    points = np.asarray(points, dtype=np.float64)
    sq = np.sum(points ** 2, axis=1)
    d2 = np.maximum(sq[:, None] + sq[None, :] - 2 * points @ points.T, 0.0)
    W = np.exp(-gamma * d2)
    np.fill_diagonal(W, 0.0)
    W = 0.5 * (W + W.T)
    return SparseGraph.from_dense(W)


# file io ------------------------------------------------------------------

_NODES_HEADER = re.compile(r"#\s*nodes\s*:\s*(\d+)")


def load_edge_list(path):
    n_declared = None
    rows, cols, weights = [], [], []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            m = _NODES_HEADER.match(raw.strip())
            if m:
                n_declared = int(m.group(1))
                continue
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) not in (2, 3):
                raise ParseError(f"expected 'i j [w]', got {line!r}", lineno)
            try:
                i, j = int(parts[0]), int(parts[1])
                w = float(parts[2]) if len(parts) == 3 else 1.0
            except ValueError:
                raise ParseError(f"cannot parse {line!r}", lineno) from None
            if i < 0 or j < 0 or (n_declared is not None
                                  and max(i, j) >= n_declared):
                raise IndexOutOfRange(f"node index out of range in {line!r}",
                                      lineno)
            if w < 0:
                raise NegativeWeight(f"line {lineno}: negative weight {w}")
            rows.append(i)
            cols.append(j)
            weights.append(w)
    if not rows:
        raise EmptyGraph(f"{path}: no edges")
    n = n_declared if n_declared is not None else max(max(rows), max(cols)) + 1
    return SparseGraph.from_edges(n, rows, cols, weights)


def load_matrix_market(path):
    with open(path) as fh:
        lines = fh.readlines()
    if not lines or not lines[0].strip():
        raise EmptyGraph(f"{path}: empty file")
    header = lines[0].split()
    if (len(header) != 5 or header[0].lower() != "%%matrixmarket"
            or header[1].lower() != "matrix"
            or header[2].lower() != "coordinate"):
        raise ParseError("expected '%%MatrixMarket matrix coordinate ...'", 1)
    field_, symmetry = header[3].lower(), header[4].lower()
    if field_ not in ("real", "integer", "pattern"):
        raise ParseError(f"unsupported field {field_!r}", 1)
    if symmetry not in ("symmetric", "general"):
        raise ParseError(f"unsupported symmetry {symmetry!r}", 1)

    size = None
    rows, cols, weights = [], [], []
    for lineno, raw in enumerate(lines[1:], 2):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        parts = line.split()
        if size is None:
            try:
                size = tuple(int(p) for p in parts)
            except ValueError:
                raise ParseError(f"bad size line {line!r}", lineno) from None
            if len(size) != 3 or size[0] != size[1]:
                raise ParseError("size line must be 'n n nnz' (square)", lineno)
            continue
        expected = 2 if field_ == "pattern" else 3
        if len(parts) != expected:
            raise ParseError(f"expected {expected} fields, got {line!r}", lineno)
        try:
            i, j = int(parts[0]) - 1, int(parts[1]) - 1
            w = 1.0 if field_ == "pattern" else float(parts[2])
        except ValueError:
            raise ParseError(f"cannot parse {line!r}", lineno) from None
        if not (0 <= i < size[0] and 0 <= j < size[0]):
            raise IndexOutOfRange(f"entry {line!r} outside {size[0]}x{size[0]}",
                                  lineno)
        rows.append(i)
        cols.append(j)
        weights.append(w)
    if size is None or not rows:
        raise EmptyGraph(f"{path}: no entries")
    if len(rows) != size[2]:
        raise ParseError(f"header announces {size[2]} entries, found {len(rows)}")
    if symmetry == "symmetric":
        W = sp.coo_matrix((weights, (rows, cols)), shape=(size[0],) * 2).tocsr()
        W.sum_duplicates()
        W = W + W.T - sp.diags(W.diagonal())
        return SparseGraph.from_edges(size[0], *_coo(W), symmetrize=False)
    return SparseGraph.from_edges(size[0], rows, cols, weights)


def _coo(W):
    W = W.tocoo()
    return W.row, W.col, W.data


def write_edge_list(g, path):
    i, j, w = g.edges()
    with open(path, "w") as fh:
        fh.write(f"# nodes: {g.n}\n")
        for a, b, c in zip(i, j, w):
            fh.write(f"{a} {b} {float(c)!r}\n")


def load_labels(path):
    """One integer label per line; ``#`` comments allowed."""
    labels = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                labels.append(int(line))
            except ValueError:
                raise ParseError(f"expected an integer, got {line!r}",
                                 lineno) from None
    return np.asarray(labels, dtype=np.int64)


def write_labels(labels, path):
    with open(path, "w") as fh:
        fh.writelines(f"{int(v)}\n" for v in labels)
