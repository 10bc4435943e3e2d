# Two-way split of Zachary's karate club.
#
# The club famously broke into two factions. We run the OT solver with the
# normalized-cut constraints (cluster volumes pinned to half the total degree)
# and compare with spectral clustering on the same graph.
#
#     python demos/karate_club.py

import pathlib

import numpy as np

from otcut import SolverConfig, solve
from otcut.baseline import spectral_clustering
from otcut.graph import load_labels, load_matrix_market
from otcut.metrics import ari, ncut_value
from otcut.solver import cluster_size_distribution

data = pathlib.Path(__file__).resolve().parent.parent / "tests" / "data"
g = load_matrix_market(data / "karate.mtx")
factions = load_labels(data / "karate.labels")
print(f"{g.n} members, {g.num_edges} friendships")

# %% OT-ncut, a handful of random starts
plan, part, trace = solve(g, 2, SolverConfig(variant="ncut", restarts=10, seed=0))
print("objective trace (best start):", np.round(trace.objectives[:6], 5), "...")
print("volume shares:", np.round(cluster_size_distribution(part, g.degrees), 4))
print(f"OT-ncut   ncut={ncut_value(g, part):.4f}  ARI={ari(factions, part):.3f}")

# the plan is a vertex of the polytope, so almost every row has one nonzero
split_rows = int(np.sum(np.count_nonzero(plan.matrix, axis=1) > 1))
print(f"rows of the plan split across clusters: {split_rows} (at most k-1 = 1)")

# %% spectral baseline
sc = spectral_clustering(g, 2, "ncut", seed=0)
print(f"spectral  ncut={ncut_value(g, sc):.4f}  ARI={ari(factions, sc):.3f}")
print("volume shares:", np.round(cluster_size_distribution(sc, g.degrees), 4))
