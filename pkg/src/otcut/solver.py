"""OT-cut objective and its nonconvex accelerated proximal gradient solver.

The problem is::

    min_{X in Pi(source, target)}  Tr(X^T L X) - lam * ||X||_F^2

with ``lam = 1 / (2 * alpha)``. With that coupling the proximal step of the
concave part plus the polytope indicator collapses to a linear program over
the polytope, ``argmin_Z <Z, (2 alpha L - I) Y>``, solved exactly with the
network simplex. Every iterate is therefore a vertex of the polytope.
"""

import enum
import math
import time
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .errors import ConfigError, DimensionMismatch
from .graph import (LaplacianKind, build_laplacian, degree_distribution,
                    uniform_distribution)
from .transport import (SizeConstraints, TransportPlan, solve_emd,
                        solve_emd_from_partition)

__all__ = ["Variant", "StopReason", "SolverConfig", "SolveTrace", "Partition",
           "OTCutResult", "objective", "gradient", "estimate_smoothness",
           "prox_step", "size_constraints", "solve", "momentum_sequence",
           "cluster_size_distribution"]

SAFE_STEP_FACTOR = 0.99


class Variant(str, enum.Enum):
    NCUT = "ncut"
    RCUT = "rcut"
    CUSTOM = "custom"


class StopReason(str, enum.Enum):
    MAX_ITER = "max_iter"
    TOLERANCE = "tolerance"


@dataclass(frozen=True)
class SolverConfig:
    """Solver settings.

    ``alpha`` is the step size; the concave regularization weight is always
    derived as ``lam = 1 / (2 * alpha)`` and cannot be set on its own. With
    ``safe_step`` the step is clamped to ``0.99 / s`` where ``s`` estimates
    the Lipschitz constant of the gradient of the trace term, which makes the
    objective sequence monotone.
    """

    alpha: float = 0.5
    max_iter: int = 20
    tol: float = 0.0
    variant: Variant = Variant.NCUT
    source: Optional[np.ndarray] = None
    target: Optional[np.ndarray] = None
    seed: int = 0
    laplacian_kind: LaplacianKind = LaplacianKind.SYM
    safe_step: bool = False
    restarts: int = 1

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        object.__setattr__(self, "laplacian_kind",
                           LaplacianKind(self.laplacian_kind))
        if not self.alpha > 0:
            raise ConfigError("alpha must be positive")
        if self.max_iter < 1:
            raise ConfigError("max_iter must be >= 1")
        if self.tol < 0:
            raise ConfigError("tol must be >= 0")
        if self.restarts < 1:
            raise ConfigError("restarts must be >= 1")
        if self.variant is Variant.CUSTOM and (self.source is None
                                               or self.target is None):
            raise ConfigError("custom variant needs both source and target")

    @property
    def lam(self):
        return 1.0 / (2.0 * self.alpha)


@dataclass
class SolveTrace:
    objectives: list = field(default_factory=list)
    per_iter_seconds: list = field(default_factory=list)
    iterations_run: int = 0
    stop_reason: StopReason = StopReason.MAX_ITER
    alpha: float = float("nan")


@dataclass(frozen=True, eq=False)
class Partition:
    assignment: np.ndarray
    k: int

    def __post_init__(self):
        a = np.asarray(self.assignment, dtype=np.int64).ravel()
        if a.size and (a.min() < 0 or a.max() >= self.k):
            raise ValueError(f"cluster indices must lie in [0, {self.k})")
        a.flags.writeable = False
        object.__setattr__(self, "assignment", a)

    @classmethod
    def from_plan(cls, X):
        """Row-wise argmax; ``np.argmax`` resolves ties to the lowest index."""
        X = np.asarray(X)
        return cls(np.argmax(X, axis=1), X.shape[1])

    @property
    def n(self):
        return self.assignment.size

    def sizes(self):
        return np.bincount(self.assignment, minlength=self.k)

    def indicator(self):
        G = np.zeros((self.n, self.k))
        G[np.arange(self.n), self.assignment] = 1.0
        return G

    def __len__(self):
        return self.n

    def __array__(self, dtype=None, copy=None):
        return self.assignment if dtype is None else self.assignment.astype(dtype)


class OTCutResult(NamedTuple):
    plan: TransportPlan
    partition: Partition
    trace: SolveTrace


def _dense(X):
    return np.asarray(getattr(X, "matrix", X), dtype=np.float64)


def _check_dims(L, X):
    if X.ndim != 2 or X.shape[0] != L.n:
        raise DimensionMismatch(f"plan has shape {X.shape}, Laplacian is "
                                f"{L.n}x{L.n}")


def objective(L, X, lam):
    """``Tr(X^T L X) - lam * ||X||_F^2``."""
    X = _dense(X)
    _check_dims(L, X)
    return float(np.sum((L.matrix @ X) * X) - lam * np.sum(X * X))


def gradient(L, X):
    """Gradient of the trace term, ``2 L X``."""
    X = _dense(X)
    _check_dims(L, X)
    return 2.0 * (L.matrix @ X)


def estimate_smoothness(L, iters=100, seed=0):
    """Upper estimate of the Lipschitz constant of ``X -> 2 L X``.

    Power iteration for the top eigenvalue of ``L``; the Rayleigh quotient
    is inflated by 1% and doubled.
    """
    n = L.n
    if L.matrix.nnz == 0 or not np.any(L.matrix.data):
        return 0.0
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n)
    v /= np.linalg.norm(v)
    rayleigh = 0.0
    for _ in range(iters):
        w = L.matrix @ v
        rayleigh = float(v @ w)
        norm = np.linalg.norm(w)
        if norm == 0:
            break
        v = w / norm
    return 2.0 * 1.01 * max(rayleigh, 0.0)


def prox_step(L, Y, alpha, constraints):
    """Exact proximal step: the OT solve with cost ``(2 alpha L - I) Y``."""
    if not alpha > 0:
        raise ConfigError("alpha must be positive")
    Y = _dense(Y)
    _check_dims(L, Y)
    cost = 2.0 * alpha * (L.matrix @ Y) - Y
    return solve_emd(cost, constraints)


def momentum_sequence(count):
    """``c_0 = 0, c_1 = 1, c_{t+1} = (sqrt(4 c_t^2 + 1) + 1) / 2``."""
    c = [0.0, 1.0]
    while len(c) < count:
        c.append((math.sqrt(4.0 * c[-1] ** 2 + 1.0) + 1.0) / 2.0)
    return c[:count]


def size_constraints(g, k, cfg):
    """The ``(source, target)`` pair implied by the configured variant."""
    if cfg.variant is Variant.NCUT:
        return SizeConstraints(degree_distribution(g), uniform_distribution(k))
    if cfg.variant is Variant.RCUT:
        return SizeConstraints(uniform_distribution(g.n), uniform_distribution(k))
    source = np.asarray(cfg.source, dtype=np.float64).ravel()
    target = np.asarray(cfg.target, dtype=np.float64).ravel()
    if source.size != g.n:
        raise ConfigError(f"source has {source.size} entries, graph has {g.n} nodes")
    if target.size != k:
        raise ConfigError(f"target has {target.size} entries, expected k={k}")
    return SizeConstraints(source, target)


def _step_size(L, cfg):
    alpha = cfg.alpha
    if cfg.safe_step:
        s = estimate_smoothness(L, seed=cfg.seed)
        if s > 0:
            alpha = min(alpha, SAFE_STEP_FACTOR / s)
    return alpha


def _run(L, constraints, init, alpha, max_iter, tol):
    lam = 1.0 / (2.0 * alpha)
    F = lambda X: objective(L, X, lam)

    x_prev = solve_emd_from_partition(init, constraints)
    x = z = x_prev
    f_x = F(x)
    c_prev, c = 0.0, 1.0
    trace = SolveTrace(objectives=[f_x], alpha=alpha)
    for _ in range(max_iter):
        tic = time.perf_counter()
        X, Xp, Z = x.matrix, x_prev.matrix, z.matrix
        Y = X + (c_prev / c) * (Z - X) + ((c_prev - 1.0) / c) * (X - Xp)
        z_new = prox_step(L, Y, alpha, constraints)
        v_new = prox_step(L, X, alpha, constraints)
        c_prev, c = c, (math.sqrt(4.0 * c * c + 1.0) + 1.0) / 2.0
        f_z, f_v = F(z_new), F(v_new)
        x_prev = x
        x, f_new = (z_new, f_z) if f_z < f_v else (v_new, f_v)
        z = z_new
        trace.per_iter_seconds.append(time.perf_counter() - tic)
        trace.objectives.append(f_new)
        trace.iterations_run += 1
        if tol > 0 and abs(f_new - f_x) <= tol * max(1.0, abs(f_x)):
            trace.stop_reason = StopReason.TOLERANCE
            break
        f_x = f_new
    return x, trace


def solve(g, k, cfg=None, init=None):
    """Partition ``g`` into ``k`` groups under the configured size constraints.

    Parameters
    ----------
    g : SparseGraph
    k : int
        Number of clusters, at least 2.
    cfg : SolverConfig, optional
    init : array_like of int, optional
        Initial hard assignment. By default a uniform random assignment drawn
        from ``cfg.seed``; with several restarts each draws a fresh one and
        the run with the lowest final objective is kept.

    Returns
    -------
    OTCutResult
        ``(plan, partition, trace)``.
    """
    cfg = cfg or SolverConfig()
    if k < 2:
        raise ConfigError("k must be >= 2")
    if g.n < 1:
        raise ConfigError("graph is empty")
    constraints = size_constraints(g, k, cfg)
    L = build_laplacian(g, cfg.laplacian_kind)
    alpha = _step_size(L, cfg)
    rng = np.random.default_rng(cfg.seed)

    best = None
    for r in range(cfg.restarts):
        if init is not None and r == 0:
            start = np.asarray(init, dtype=np.int64)
        else:
            start = rng.integers(0, k, size=g.n)
        x, trace = _run(L, constraints, start, alpha, cfg.max_iter, cfg.tol)
        if best is None or trace.objectives[-1] < best[1].objectives[-1]:
            best = (x, trace)
    x, trace = best
    return OTCutResult(x, Partition.from_plan(x.matrix), trace)


def cluster_size_distribution(p, weights=None):
    """Share of the total node weight in each cluster (cardinality by default)."""
    labels = np.asarray(getattr(p, "assignment", p), dtype=np.int64)
    k = getattr(p, "k", None) or (int(labels.max()) + 1 if labels.size else 0)
    w = np.ones(labels.size) if weights is None else np.asarray(weights, float)
    if w.size != labels.size:
        raise DimensionMismatch("weights and partition lengths differ")
    sizes = np.bincount(labels, weights=w, minlength=k)
    return sizes / sizes.sum()
