import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import cliques, random_graph
from oracles import brute_force_min_balanced_cut, central_difference_gradient
from otcut.errors import ConfigError, DimensionMismatch
from otcut.graph import SparseGraph, build_laplacian, make_two_moons_knn
from otcut.metrics import ari, cut_value
from otcut.solver import (Partition, SolverConfig, StopReason,
                          cluster_size_distribution, estimate_smoothness,
                          gradient, momentum_sequence, objective, prox_step,
                          size_constraints, solve)
from otcut.transport import SizeConstraints, indicator_matrix


def path2():
    return SparseGraph.from_edges(2, [0], [1])


def test_objective_two_cliques_indicator(two_cliques):
    g, y = two_cliques
    X = indicator_matrix(y, 2) / 4
    for kind in ("sym", "unnormalized"):
        L = build_laplacian(g, kind)
        assert objective(L, X, 1.0) == pytest.approx(-0.25, abs=1e-15)


def test_objective_path_no_regularizer():
    L = build_laplacian(path2(), "unnormalized")
    assert objective(L, np.eye(2) / 2, 0.0) == pytest.approx(0.5)


def test_objective_edgeless_is_pure_regularizer():
    L = build_laplacian(SparseGraph.from_edges(3, [], []), "unnormalized")
    X = np.full((3, 2), 1 / 6)
    assert objective(L, X, 2.0) == pytest.approx(-2.0 * 6 / 36)


def test_objective_dimension_mismatch():
    L = build_laplacian(path2(), "sym")
    with pytest.raises(DimensionMismatch):
        objective(L, np.ones((3, 2)), 1.0)


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 12), st.integers(2, 4), st.integers(0, 10_000))
def test_gradient_matches_finite_differences(n, k, seed):
    rng = np.random.default_rng(seed)
    g = random_graph(rng, n, p=0.6)
    import warnings
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        L = build_laplacian(g, "unnormalized")
    X = rng.random((n, k))
    ref = central_difference_gradient(lambda Z: objective(L, Z, 0.0), X)
    G = gradient(L, X)
    assert np.linalg.norm(G - ref) <= 1e-5 * max(np.linalg.norm(ref), 1e-12)


def test_smoothness_estimates():
    L = build_laplacian(path2(), "unnormalized")
    assert estimate_smoothness(L) == pytest.approx(4.04, rel=1e-6)
    assert estimate_smoothness(build_laplacian(path2(), "sym")) <= 4.04 + 1e-9
    with pytest.warns(RuntimeWarning):
        L0 = build_laplacian(SparseGraph.from_edges(3, [], []), "sym")
    # isolated nodes carry identity rows; the empty unnormalized Laplacian is zero
    assert estimate_smoothness(L0) > 0
    Lz = build_laplacian(SparseGraph.from_edges(3, [], []), "unnormalized")
    assert estimate_smoothness(Lz) == 0.0


def test_smoothness_bounds_top_eigenvalue():
    rng = np.random.default_rng(4)
    for _ in range(5):
        g = random_graph(rng, 30, p=0.3)
        L = build_laplacian(g, "unnormalized")
        top = np.linalg.eigvalsh(L.matrix.toarray()).max()
        assert estimate_smoothness(L, iters=500) >= 2 * top * (1 - 1e-6)


def test_momentum_sequence():
    c = momentum_sequence(5)
    assert c[:2] == [0.0, 1.0]
    assert c[2] == pytest.approx((1 + math.sqrt(5)) / 2)
    assert all(b > a for a, b in zip(c, c[1:]))


def test_prox_of_vertex_is_fixed_on_cliques(two_cliques):
    g, y = two_cliques
    L = build_laplacian(g, "sym")
    c = SizeConstraints(np.full(4, 0.25), [0.5, 0.5])
    X = indicator_matrix(y, 2) / 4
    plan = prox_step(L, X, 0.5, c)
    np.testing.assert_allclose(plan.matrix, X, atol=1e-15)
    with pytest.raises(ConfigError):
        prox_step(L, X, 0.0, c)


def test_rcut_separates_cliques():
    g, y = cliques([4, 4])
    plan, part, trace = solve(g, 2, SolverConfig(variant="rcut", seed=1))
    assert ari(y, part.assignment) == 1.0
    assert cut_value(g, part) == 0.0
    assert trace.objectives[-1] == pytest.approx(-trace.alpha ** -1 / 2 * 8 / 64)


def test_rcut_matches_brute_force_balanced_cut():
    g, _ = cliques([3, 3], bridge=(0, 3, 1.0))
    best = brute_force_min_balanced_cut(g.to_dense(), [3, 3])
    part = solve(g, 2, SolverConfig(variant="rcut", restarts=5)).partition
    assert np.bincount(part.assignment).tolist() == [3, 3]
    assert cut_value(g, part) == pytest.approx(best) == pytest.approx(2.0)


@pytest.mark.parametrize("kind", ["sym", "unnormalized"])
def test_safe_step_descent_is_monotone(kind):
    g = make_two_moons_knn(120, 0.05, 8, seed=2)
    cfg = SolverConfig(variant="ncut", safe_step=True, laplacian_kind=kind,
                       max_iter=25, seed=3)
    trace = solve(g, 2, cfg).trace
    f = np.array(trace.objectives)
    assert np.all(np.diff(f) <= 1e-12 * np.maximum(1, np.abs(f[:-1])))
    s = estimate_smoothness(build_laplacian(g, kind), seed=3)
    assert trace.alpha == pytest.approx(0.99 / s)


def test_iterates_are_vertices_with_exact_marginals():
    g = make_two_moons_knn(80, 0.05, 6, seed=5)
    for variant in ("ncut", "rcut"):
        cfg = SolverConfig(variant=variant, max_iter=5)
        plan, part, _ = solve(g, 3, cfg)
        c = size_constraints(g, 3, cfg)
        np.testing.assert_allclose(plan.matrix.sum(axis=1), c.source, atol=1e-9)
        np.testing.assert_allclose(plan.matrix.sum(axis=0), c.target, atol=1e-9)
        assert plan.matrix.min() >= 0 and plan.nnz <= g.n + 3 - 1
        assert part.n == g.n and part.k == 3


def test_fixed_point_start_stays_put():
    g, y = cliques([3, 3])
    cfg = SolverConfig(variant="rcut", max_iter=10)
    plan, part, trace = solve(g, 2, cfg, init=y)
    assert np.array_equal(part.assignment, y)
    assert np.ptp(trace.objectives) == 0.0


def test_weight_scaling_invariance():
    rng = np.random.default_rng(8)
    g = random_graph(rng, 25, p=0.3)
    init = rng.integers(0, 3, 25)
    s = 7.5
    gs = SparseGraph(g.adjacency * s)
    base = SolverConfig(variant="rcut", laplacian_kind="unnormalized",
                        alpha=0.05, max_iter=15)
    scaled = SolverConfig(variant="rcut", laplacian_kind="unnormalized",
                          alpha=0.05 / s, max_iter=15)
    p1 = solve(g, 3, base, init=init)
    p2 = solve(gs, 3, scaled, init=init)
    np.testing.assert_array_equal(p1.partition.assignment, p2.partition.assignment)
    np.testing.assert_allclose(np.array(p2.trace.objectives),
                               s * np.array(p1.trace.objectives),
                               rtol=1e-9, atol=1e-12)


def test_deterministic_for_fixed_seed():
    g = make_two_moons_knn(100, 0.05, 8, seed=0)
    a = solve(g, 2, SolverConfig(seed=4, restarts=2))
    b = solve(g, 2, SolverConfig(seed=4, restarts=2))
    np.testing.assert_array_equal(a.plan.matrix, b.plan.matrix)
    assert a.trace.objectives == b.trace.objectives


def test_tolerance_stops_early():
    g, _ = cliques([3, 3])
    trace = solve(g, 2, SolverConfig(variant="rcut", tol=1e-12, max_iter=50)).trace
    assert trace.stop_reason is StopReason.TOLERANCE
    assert trace.iterations_run < 50
    assert len(trace.objectives) == trace.iterations_run + 1


def test_custom_variant_hits_target_sizes():
    g, _ = cliques([2, 6])
    cfg = SolverConfig(variant="custom", source=np.full(8, 1 / 8),
                       target=[0.25, 0.75], max_iter=10)
    part = solve(g, 2, cfg).partition
    sizes = cluster_size_distribution(part)
    np.testing.assert_allclose(np.sort(sizes), [0.25, 0.75])


def test_config_validation():
    with pytest.raises(ConfigError):
        SolverConfig(alpha=0)
    with pytest.raises(ConfigError):
        SolverConfig(variant="custom", target=[0.5, 0.5])
    with pytest.raises(ConfigError):
        SolverConfig(max_iter=0)
    with pytest.raises(ValueError):
        SolverConfig(variant="bogus")
    with pytest.raises(ConfigError):
        solve(path2(), 1)
    g, _ = cliques([2, 2])
    with pytest.raises(ConfigError):
        solve(g, 2, SolverConfig(variant="custom", source=[1.0], target=[0.5, 0.5]))
    assert SolverConfig(alpha=2.0).lam == 0.25


def test_cluster_size_distribution_examples():
    np.testing.assert_allclose(cluster_size_distribution([0, 0, 1, 1]), [0.5, 0.5])
    star = SparseGraph.from_edges(3, [0, 0], [1, 2])
    np.testing.assert_allclose(
        cluster_size_distribution([0, 1, 1], star.degrees), [0.5, 0.5])
    np.testing.assert_allclose(
        cluster_size_distribution(Partition(np.array([0, 0]), 3)), [1, 0, 0])


def test_partition_from_plan_ties_to_lowest():
    p = Partition.from_plan(np.array([[0.2, 0.2], [0.0, 0.3]]))
    assert p.assignment.tolist() == [0, 1]
    assert p.sizes().tolist() == [1, 1]
    with pytest.raises(ValueError):
        Partition(np.array([0, 2]), 2)
