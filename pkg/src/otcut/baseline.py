"""Spectral clustering baseline: dense eigendecomposition + k-means.

Meant for comparisons on desk-scale graphs, so the eigensolver is dense and
capped at ``DENSE_CAP`` nodes.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, TooLarge
from .graph import LaplacianKind, build_laplacian
from .solver import Partition

__all__ = ["SpectralEmbedding", "spectral_embed", "kmeans", "spectral_clustering",
           "DENSE_CAP"]

DENSE_CAP = 3000


@dataclass(frozen=True, eq=False)
class SpectralEmbedding:
    vectors: np.ndarray
    eigenvalues: np.ndarray


def spectral_embed(L, k, cap=DENSE_CAP):
    """The ``k`` eigenpairs of ``L`` with the smallest eigenvalues."""
    n = L.n
    if n > cap:
        raise TooLarge(f"dense eigensolver is capped at {cap} nodes, got {n}")
    if not 1 <= k <= n:
        raise ConfigError(f"k must lie in [1, {n}]")
    A = L.matrix.toarray()
    A = 0.5 * (A + A.T)
    vals, vecs = np.linalg.eigh(A)
    return SpectralEmbedding(vecs[:, :k], vals[:k])


def _kmeanspp(points, k, rng):
    n = len(points)
    centers = np.empty((k, points.shape[1]))
    centers[0] = points[rng.integers(n)]
    d2 = np.sum((points - centers[0]) ** 2, axis=1)
    for c in range(1, k):
        total = d2.sum()
        if total <= 0:
            idx = rng.integers(n)
        else:
            idx = rng.choice(n, p=d2 / total)
        centers[c] = points[idx]
        d2 = np.minimum(d2, np.sum((points - centers[c]) ** 2, axis=1))
    return centers


def _sq_dists(points, centers):
    return (np.sum(points ** 2, axis=1)[:, None]
            - 2 * points @ centers.T + np.sum(centers ** 2, axis=1)[None, :])


def _lloyd(points, centers, max_iter):
    inertias = []
    labels = None
    for _ in range(max_iter):
        d2 = np.maximum(_sq_dists(points, centers), 0.0)
        new = np.argmin(d2, axis=1)
        inertias.append(float(d2[np.arange(len(points)), new].sum()))
        if labels is not None and np.array_equal(new, labels):
            break
        labels = new
        for c in range(len(centers)):
            members = points[labels == c]
            if len(members):
                centers[c] = members.mean(axis=0)
    return labels, inertias


def kmeans(points, k, seed=0, restarts=10, max_iter=300, return_inertia=False):
    """Lloyd's algorithm from k-means++ seeds; best of ``restarts`` by inertia."""
    points = np.asarray(points, dtype=np.float64)
    if points.ndim == 1:
        points = points[:, None]
    if not 1 <= k <= len(points):
        raise ConfigError(f"k must lie in [1, {len(points)}]")
    rng = np.random.default_rng(seed)
    best = None
    for _ in range(restarts):
        labels, inertias = _lloyd(points, _kmeanspp(points, k, rng), max_iter)
        if best is None or inertias[-1] < best[1]:
            best = (labels, inertias[-1])
    part = Partition(best[0], k)
    return (part, best[1]) if return_inertia else part


def spectral_clustering(g, k, variant="ncut", seed=0, restarts=10,
                        cap=DENSE_CAP):
    """Spectral relaxation of ncut (normalized Laplacian, unit rows) or rcut."""
    if k < 1:
        raise ConfigError("k must be >= 1")
    if variant == "ncut":
        emb = spectral_embed(build_laplacian(g, LaplacianKind.SYM), k, cap)
        rows = emb.vectors
        norms = np.linalg.norm(rows, axis=1, keepdims=True)
        rows = rows / np.where(norms > 0, norms, 1.0)
    elif variant == "rcut":
        emb = spectral_embed(build_laplacian(g, LaplacianKind.UNNORMALIZED), k, cap)
        rows = emb.vectors
    else:
        raise ConfigError(f"unknown variant {variant!r}")
    return kmeans(rows, k, seed=seed, restarts=restarts)
