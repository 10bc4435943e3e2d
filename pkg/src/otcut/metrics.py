"""Clustering agreement, size-constraint faithfulness and cut values.

Cut values follow the k-cut sum ``sum_i cut(A_i)``: an edge joining two
different clusters is counted once from each side.
"""

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import LengthMismatch

__all__ = ["ContingencyTable", "contingency_table", "ari", "kl_divergence",
           "cut_value", "ncut_value", "rcut_value", "cluster_cuts"]


def _labels(p):
    return np.asarray(getattr(p, "assignment", p), dtype=np.int64).ravel()


@dataclass(frozen=True)
class ContingencyTable:
    counts: np.ndarray
    row_sums: np.ndarray
    col_sums: np.ndarray

    @property
    def n(self):
        return int(self.counts.sum())


def contingency_table(a, b):
    a, b = _labels(a), _labels(b)
    if a.size != b.size:
        raise LengthMismatch(f"partitions have lengths {a.size} and {b.size}")
    _, ai = np.unique(a, return_inverse=True)
    _, bi = np.unique(b, return_inverse=True)
    counts = np.zeros((ai.max(initial=-1) + 1, bi.max(initial=-1) + 1),
                      dtype=np.int64)
    np.add.at(counts, (ai, bi), 1)
    return ContingencyTable(counts, counts.sum(axis=1), counts.sum(axis=0))


def _pairs(x):
    x = np.asarray(x, dtype=np.float64)
    return x * (x - 1) / 2


def ari(a, b):
    """Hubert-Arabie adjusted Rand index.

    Returns 1.0 when the two labelings agree up to relabeling. When the
    chance-corrected denominator vanishes (e.g. one side is a single
    cluster), the result is 0.0 unless the labelings are identical.
    """
    table = contingency_table(a, b)
    n = table.n
    if n < 2:
        return 1.0
    index = _pairs(table.counts).sum()
    sum_a = _pairs(table.row_sums).sum()
    sum_b = _pairs(table.col_sums).sum()
    expected = sum_a * sum_b / _pairs(n)
    max_index = 0.5 * (sum_a + sum_b)
    denom = max_index - expected
    if denom == 0:
        same = (table.counts.shape[0] == table.counts.shape[1]
                and np.count_nonzero(table.counts) == table.counts.shape[0])
        return 1.0 if same else 0.0
    return float((index - expected) / denom)


def kl_divergence(p, q):
    """``sum_j p_j log(p_j / q_j)``; ``inf`` if ``p`` is not dominated by ``q``."""
    p = np.asarray(p, dtype=np.float64).ravel()
    q = np.asarray(q, dtype=np.float64).ravel()
    if p.size != q.size:
        raise LengthMismatch(f"distributions have lengths {p.size} and {q.size}")
    support = p > 0
    if np.any(q[support] <= 0):
        return float("inf")
    return float(max(np.sum(p[support] * np.log(p[support] / q[support])), 0.0))


def cluster_cuts(g, p, k=None):
    """Per-cluster ``cut(A_i)``, the weight of edges leaving cluster ``i``."""
    labels = _labels(p)
    if labels.size != g.n:
        raise LengthMismatch(f"partition has {labels.size} entries, graph has {g.n}")
    k = k or getattr(p, "k", None) or int(labels.max()) + 1
    W = sp.coo_matrix(g.adjacency)
    crossing = labels[W.row] != labels[W.col]
    return np.bincount(labels[W.row[crossing]], weights=W.data[crossing],
                       minlength=k)


def cut_value(g, p):
    return float(cluster_cuts(g, p).sum())


def _normalized(cuts, sizes, what):
    empty = sizes <= 0
    if np.any(empty):
        warnings.warn(f"{int(empty.sum())} empty cluster(s) ignored in {what}",
                      RuntimeWarning, stacklevel=3)
    return float(np.sum(cuts[~empty] / sizes[~empty]))


def ncut_value(g, p):
    """``sum_i cut(A_i) / vol(A_i)``; empty clusters contribute 0."""
    labels = _labels(p)
    cuts = cluster_cuts(g, p)
    vol = np.bincount(labels, weights=g.degrees, minlength=cuts.size)
    return _normalized(cuts, vol, "ncut")


def rcut_value(g, p):
    """``sum_i cut(A_i) / |A_i|``; empty clusters contribute 0."""
    labels = _labels(p)
    cuts = cluster_cuts(g, p)
    card = np.bincount(labels, minlength=cuts.size).astype(np.float64)
    return _normalized(cuts, card, "rcut")
