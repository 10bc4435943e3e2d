import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings, strategies as st

from conftest import DATA, random_graph
from oracles import edge_sum_quadratic
from otcut.errors import (AsymmetricInput, EmptyGraph, IndexOutOfRange,
                          NegativeWeight, ParseError)
from otcut.graph import (LaplacianKind, SparseGraph, build_laplacian,
                         concentric_circles, degree_distribution,
                         load_edge_list, load_matrix_market, make_knn_graph,
                         make_rbf_graph, make_two_moons_knn,
                         uniform_distribution, write_edge_list)


def path2():
    return SparseGraph.from_edges(2, [0], [1])


def star(n):
    return SparseGraph.from_edges(n, [0] * (n - 1), range(1, n))


def test_path_unnormalized_laplacian():
    L = build_laplacian(path2(), LaplacianKind.UNNORMALIZED)
    np.testing.assert_array_equal(L.matrix.toarray(), [[1, -1], [-1, 1]])


def test_triangle_sym_laplacian():
    g = SparseGraph.from_edges(3, [0, 1, 0], [1, 2, 2])
    L = build_laplacian(g, "sym").matrix.toarray()
    np.testing.assert_allclose(np.diag(L), 1.0)
    off = L[~np.eye(3, dtype=bool)]
    np.testing.assert_allclose(off, -0.5)


def test_star_unnormalized():
    L = build_laplacian(star(5), "unnormalized").matrix.toarray()
    assert L[0, 0] == 4
    np.testing.assert_array_equal(np.diag(L)[1:], 1)
    np.testing.assert_array_equal(L.sum(axis=1), 0)


def test_negative_and_asymmetric_rejected():
    with pytest.raises(NegativeWeight):
        SparseGraph.from_dense([[0, -1], [-1, 0]])
    with pytest.raises(AsymmetricInput):
        SparseGraph(sp.csr_matrix(np.array([[0, 1.0], [2.0, 0]])))


def test_self_loops_cancel_in_laplacian():
    W = np.array([[3.0, 1.0], [1.0, 0.0]])
    g = SparseGraph.from_dense(W)
    assert g.degrees[0] == 4.0
    L = build_laplacian(g, "unnormalized").matrix.toarray()
    np.testing.assert_array_equal(L, [[1, -1], [-1, 1]])


def test_isolated_node_identity_row():
    g = SparseGraph.from_edges(3, [0], [1])
    with pytest.warns(RuntimeWarning, match="isolated"):
        L = build_laplacian(g, "sym").matrix.toarray()
    np.testing.assert_array_equal(L[2], [0, 0, 1])
    assert degree_distribution(g)[2] == 0


def test_degree_distribution_examples():
    np.testing.assert_allclose(degree_distribution(path2()), [0.5, 0.5])
    np.testing.assert_allclose(degree_distribution(star(3)), [0.5, 0.25, 0.25])
    np.testing.assert_allclose(uniform_distribution(4), [0.25] * 4)
    with pytest.raises(EmptyGraph):
        degree_distribution(SparseGraph.from_edges(3, [], []))


def test_degree_distribution_permutation_invariant():
    rng = np.random.default_rng(3)
    rows, cols = rng.integers(0, 20, 60), rng.integers(0, 20, 60)
    w = rng.random(60)
    perm = rng.permutation(60)
    p1 = degree_distribution(SparseGraph.from_edges(20, rows, cols, w))
    p2 = degree_distribution(SparseGraph.from_edges(20, rows[perm], cols[perm],
                                                    w[perm]))
    np.testing.assert_allclose(p1, p2, rtol=0, atol=1e-15)
    assert abs(p1.sum() - 1) <= 1e-12


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 40), st.integers(0, 10_000))
def test_laplacian_properties(n, seed):
    rng = np.random.default_rng(seed)
    g = random_graph(rng, n)
    L = build_laplacian(g, "unnormalized")
    M = L.matrix.toarray()
    np.testing.assert_array_equal(M, M.T)
    assert np.all(np.abs(M.sum(axis=1)) <= 1e-12 * np.maximum(g.degrees, 1))
    edges = list(zip(*g.edges()))
    for _ in range(5):
        x = rng.standard_normal(n)
        ref = edge_sum_quadratic(edges, x)
        assert x @ M @ x == pytest.approx(ref, rel=1e-9, abs=1e-12)
    assert np.linalg.eigvalsh(M).min() >= -1e-9


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 50), st.integers(0, 10_000))
def test_sym_laplacian_spectrum(n, seed):
    g = random_graph(np.random.default_rng(seed), n, p=0.5)
    import warnings
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        L = build_laplacian(g, "sym").matrix.toarray()
    vals = np.linalg.eigvalsh(L)
    assert vals.min() >= -1e-9 and vals.max() <= 2 + 1e-9
    d = g.degrees
    np.testing.assert_allclose(np.diag(L)[d > 0], 1.0)


def test_knn_graph_small():
    pts = np.array([[0.0, 0], [0.1, 0], [5, 0], [5.2, 0]])
    g = make_knn_graph(pts, 1)
    W = g.to_dense()
    np.testing.assert_array_equal(W, W.T)
    assert W[0, 1] == 1 and W[2, 3] == 1 and W[0, 2] == 0


def test_moons_deterministic():
    g1 = make_two_moons_knn(300, 0.05, 10, 0)
    g2 = make_two_moons_knn(300, 0.05, 10, 0)
    assert (g1.adjacency != g2.adjacency).nnz == 0
    assert g1.n == 300


def test_rbf_weights():
    g = make_rbf_graph([[0.0, 0.0], [0.0, 0.0]], 1.0)
    assert g.to_dense()[0, 1] == 1.0
    g = make_rbf_graph([[0.0, 0.0], [1.0, 0.0]], 1.0)
    assert g.to_dense()[0, 1] == pytest.approx(np.exp(-1))
    assert g.to_dense()[0, 0] == 0.0
    with pytest.raises(ValueError):
        make_rbf_graph([[0.0, 0.0]], 0.0)


def test_circles_labels_balanced():
    pts, y = concentric_circles(300, 0.05, 0)
    assert pts.shape == (300, 2) and np.bincount(y).tolist() == [150, 150]


def test_edge_list_single_edge(tmp_path):
    f = tmp_path / "g.txt"
    f.write_text("# a comment\n0 1 2.5\n")
    g = load_edge_list(f)
    assert g.n == 2
    np.testing.assert_array_equal(g.to_dense(), [[0, 2.5], [2.5, 0]])


def test_edge_list_duplicates_and_max_rule(tmp_path):
    f = tmp_path / "g.txt"
    f.write_text("0 1 1\n0 1 1\n1 0 1.5\n")
    g = load_edge_list(f)
    assert g.to_dense()[0, 1] == 2.0


def test_edge_list_errors(tmp_path):
    f = tmp_path / "empty.txt"
    f.write_text("")
    with pytest.raises(EmptyGraph):
        load_edge_list(f)
    f.write_text("0 1 1\n0 x\n")
    with pytest.raises(ParseError) as err:
        load_edge_list(f)
    assert err.value.lineno == 2
    f.write_text("# nodes: 2\n0 5 1\n")
    with pytest.raises(IndexOutOfRange):
        load_edge_list(f)
    f.write_text("-1 0 1\n")
    with pytest.raises(IndexOutOfRange):
        load_edge_list(f)


def test_edge_list_roundtrip(tmp_path):
    g = make_two_moons_knn(60, 0.05, 5, 1)
    g2 = SparseGraph.from_edges(g.n + 2, *g.edges())
    write_edge_list(g2, tmp_path / "g.txt")
    g3 = load_edge_list(tmp_path / "g.txt")
    assert g3.n == 62
    assert (g2.adjacency != g3.adjacency).nnz == 0


def test_karate_matrix_market():
    g = load_matrix_market(DATA / "karate.mtx")
    assert g.n == 34 and g.num_edges == 78
    assert g.degrees[0] == 16 and g.degrees[33] == 17


def test_matrix_market_errors(tmp_path):
    f = tmp_path / "g.mtx"
    f.write_text("")
    with pytest.raises(EmptyGraph):
        load_matrix_market(f)
    f.write_text("%%MatrixMarket matrix coordinate real symmetric\n3 3 1\n4 1 1.0\n")
    with pytest.raises(IndexOutOfRange) as err:
        load_matrix_market(f)
    assert err.value.lineno == 3
    f.write_text("%%MatrixMarket matrix array real general\n")
    with pytest.raises(ParseError):
        load_matrix_market(f)
    f.write_text("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 2 1.0\n2 1 3.0\n")
    assert load_matrix_market(f).to_dense()[0, 1] == 3.0
