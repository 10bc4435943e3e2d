import pathlib
import sys

import numpy as np
import pytest

sys.path.insert(0, str(pathlib.Path(__file__).parent))

from otcut.graph import SparseGraph, load_labels, load_matrix_market  # noqa: E402

DATA = pathlib.Path(__file__).parent / "data"


def cliques(sizes, bridge=None):
    """Disjoint unit-weight cliques, optionally joined by one bridge edge."""
    n = sum(sizes)
    W = np.zeros((n, n))
    start = 0
    labels = []
    for c, s in enumerate(sizes):
        W[start:start + s, start:start + s] = 1.0
        labels += [c] * s
        start += s
    np.fill_diagonal(W, 0.0)
    if bridge is not None:
        i, j, w = bridge
        W[i, j] = W[j, i] = w
    return SparseGraph.from_dense(W), np.array(labels)


@pytest.fixture
def two_cliques():
    return cliques([2, 2])


@pytest.fixture
def karate():
    return load_matrix_market(DATA / "karate.mtx"), load_labels(DATA / "karate.labels")


def random_graph(rng, n, p=0.4, weighted=True):
    W = np.triu(rng.random((n, n)) < p, 1).astype(float)
    if weighted:
        W *= rng.uniform(0.1, 2.0, size=W.shape)
    W = W + W.T
    return SparseGraph.from_dense(W)


ACCEPTANCE = {}


def pytest_runtest_makereport(item, call):
    crit = getattr(item.function, "criterion", None)
    if crit is not None and call.when == "call":
        ACCEPTANCE[crit] = (item.name, call.excinfo is None)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(ACCEPTANCE):
        name, ok = ACCEPTANCE[crit]
        terminalreporter.write_line(f"criterion {crit:2d}: {'PASS' if ok else 'FAIL'}  {name}")
