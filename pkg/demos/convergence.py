# Objective traces with and without the safe step.
#
# The default step alpha=1/2 is aggressive; the objective may go up between
# iterations. With safe_step=True the step is clamped below 1/s, where s
# estimates the Lipschitz constant of the gradient, and the monitor then
# guarantees a non-increasing sequence.
#
#     python demos/convergence.py

import numpy as np

from otcut import SolverConfig, solve
from otcut.graph import build_laplacian, make_two_moons_knn
from otcut.solver import estimate_smoothness

g = make_two_moons_knn(300, noise=0.05, k_neighbors=10, seed=0)
for kind in ("sym", "unnormalized"):
    s = estimate_smoothness(build_laplacian(g, kind))
    print(f"\n{kind} Laplacian, smoothness estimate s = {s:.3f}")
    for safe in (False, True):
        cfg = SolverConfig(variant="ncut", laplacian_kind=kind, safe_step=safe,
                           max_iter=30)
        trace = solve(g, 2, cfg).trace
        f = np.array(trace.objectives)
        ups = int(np.sum(np.diff(f) > 1e-12))
        print(f"  safe_step={safe!s:5}  alpha={trace.alpha:.4f}  "
              f"F: {f[0]:+.5f} -> {f[-1]:+.5f}  increases: {ups}")
        print("   ", " ".join(f"{v:+.4f}" for v in f[:8]), "...")
