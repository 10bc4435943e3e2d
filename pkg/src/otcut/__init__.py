"""Graph partitioning under arbitrary cluster-size constraints.

The partition is the argmax of an optimal transport plan between node sizes
and cluster sizes that minimizes ``Tr(X^T L X) - lam ||X||^2``, found by a
nonconvex accelerated proximal gradient method whose proximal steps are exact
transport problems.
"""

from .errors import *  # noqa: F401,F403
from .graph import (Laplacian, LaplacianKind, SparseGraph, build_laplacian,
                    concentric_circles, degree_distribution, load_edge_list,
                    load_labels, load_matrix_market, make_knn_graph,
                    make_rbf_graph, make_two_moons_knn, two_moons,
                    uniform_distribution, write_edge_list, write_labels)
from .metrics import ari, cut_value, kl_divergence, ncut_value, rcut_value
from .solver import (OTCutResult, Partition, SolverConfig, SolveTrace,
                     StopReason, Variant, cluster_size_distribution,
                     estimate_smoothness, gradient, objective, prox_step,
                     size_constraints, solve)
from .transport import (SizeConstraints, TransportPlan, solve_emd,
                        solve_emd_from_partition)

__version__ = "0.1.0"
