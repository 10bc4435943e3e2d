"""Exact discrete optimal transport via the network simplex.

``solve_emd`` returns an optimal *basic* solution of the transportation LP,
i.e. a vertex of the polytope of nonnegative ``n x k`` matrices with the
prescribed row and column sums. Vertices have at most ``n + k - 1``
nonzeros, which is what makes the plans usable as (nearly) hard partitions.
"""

from dataclasses import dataclass, field

import numpy as np

from . import _simplex
from .errors import DimensionMismatch, InfeasibleMarginals, NumericalFailure

__all__ = ["SizeConstraints", "TransportPlan", "solve_emd",
           "solve_emd_from_partition", "reduced_costs", "indicator_matrix"]

SUM_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class SizeConstraints:
    """Source (per node) and target (per cluster) probability vectors.

    On construction the source is renormalized to sum to one and the target
    is rescaled to the source's floating-point sum, so that supplies and
    demands balance exactly in working precision.
    """

    source: np.ndarray
    target: np.ndarray

    def __post_init__(self):
        src = np.array(self.source, dtype=np.float64).ravel()
        tgt = np.array(self.target, dtype=np.float64).ravel()
        for name, v in (("source", src), ("target", tgt)):
            if v.size == 0:
                raise InfeasibleMarginals(f"{name} distribution is empty")
            if not np.all(np.isfinite(v)) or v.min() < 0:
                raise InfeasibleMarginals(f"{name} entries must be finite and >= 0")
            if abs(v.sum() - 1.0) > SUM_TOL:
                raise InfeasibleMarginals(
                    f"{name} sums to {v.sum()!r}, expected 1 within {SUM_TOL}")
        src = src / src.sum()
        tgt = tgt * (src.sum() / tgt.sum())
        src.flags.writeable = False
        tgt.flags.writeable = False
        object.__setattr__(self, "source", src)
        object.__setattr__(self, "target", tgt)

    @property
    def n(self):
        return self.source.size

    @property
    def k(self):
        return self.target.size


@dataclass(frozen=True, eq=False)
class TransportPlan:
    """An ``n x k`` coupling, stored densely (k is small).

    ``row_duals``/``col_duals`` certify optimality: for the cost ``M`` the
    plan was solved with, ``M - row_duals[:, None] - col_duals[None, :]`` is
    nonnegative and vanishes on the support.
    """

    matrix: np.ndarray
    objective: float
    row_duals: np.ndarray = field(default=None, repr=False)
    col_duals: np.ndarray = field(default=None, repr=False)
    pivots: int = 0

    @property
    def shape(self):
        return self.matrix.shape

    @property
    def nnz(self):
        return int(np.count_nonzero(self.matrix > 0))

    def entries(self):
        """Sparse ``(i, j, mass)`` triplets of the strictly positive cells."""
        i, j = np.nonzero(self.matrix > 0)
        return i, j, self.matrix[i, j]

    def to_triplet_text(self):
        lines = [f"# plan {self.shape[0]} {self.shape[1]}"]
        lines += [f"{a} {b} {float(m)!r}" for a, b, m in zip(*self.entries())]
        return "\n".join(lines) + "\n"

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)


def solve_emd(cost, constraints, max_pivots=None):
    """Optimal vertex of ``min <cost, X>`` over the transportation polytope.

    Parameters
    ----------
    cost : (n, k) array_like
        Finite cost matrix. Costs are affinely rescaled to [0, 1] internally;
        the returned objective and duals are in the original units.
    constraints : SizeConstraints
    max_pivots : int, optional
        Pivot cap; defaults to ``50 * (n + k) * k + 1000``.
    """
    M = np.asarray(cost, dtype=np.float64)
    if M.ndim != 2 or M.shape != (constraints.n, constraints.k):
        raise DimensionMismatch(
            f"cost has shape {M.shape}, constraints need "
            f"({constraints.n}, {constraints.k})")
    if not np.all(np.isfinite(M)):
        raise ValueError("cost matrix must be finite")
    n, k = M.shape
    lo = M.min()
    scale = M.max() - lo
    if scale <= 0:
        scale = 1.0
    C = (M - lo) / scale
    if max_pivots is None:
        max_pivots = 50 * (n + k) * k + 1000
    X, row_pot, col_pot, status, pivots = _simplex.transport_simplex(
        np.ascontiguousarray(C), constraints.source, constraints.target,
        max_pivots)
    if status == _simplex.ITERATION_LIMIT:
        raise NumericalFailure(f"network simplex hit the pivot cap ({max_pivots})")
    if status == _simplex.INFEASIBLE:
        raise InfeasibleMarginals("supplies and demands could not be balanced")
    row_duals = lo - scale * row_pot
    col_duals = scale * col_pot
    return TransportPlan(X, float(np.sum(M * X)), row_duals, col_duals,
                         int(pivots))


def reduced_costs(cost, plan):
    """``cost - u - v`` under the plan's dual potentials (all >= 0 at optimum)."""
    M = np.asarray(cost, dtype=np.float64)
    return M - plan.row_duals[:, None] - plan.col_duals[None, :]


def indicator_matrix(assignment, k):
    assignment = np.asarray(assignment, dtype=np.int64)
    G = np.zeros((assignment.size, k))
    G[np.arange(assignment.size), assignment] = 1.0
    return G


def solve_emd_from_partition(init, constraints):
    """Project a hard assignment onto the polytope: OT with cost ``-G``."""
    init = np.asarray(getattr(init, "assignment", init), dtype=np.int64)
    k = constraints.k
    if init.size != constraints.n:
        raise DimensionMismatch(
            f"assignment has {init.size} entries, expected {constraints.n}")
    if init.size and (init.min() < 0 or init.max() >= k):
        raise ValueError(f"cluster indices must lie in [0, {k})")
    return solve_emd(-indicator_matrix(init, k), constraints)
