import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from interp_learn.exceptions import NegativeKappa, NoLabels, SingularSystem
from interp_learn.graph_ssl import (
    LabeledGraph,
    complete_graph,
    fully_connected_eta,
    hoeffding_excess_bound,
    knn_graph,
    read_edge_list,
    read_labels,
    solve_graph_interpolant,
)

PATH = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=float)


def _complete_labeled(n, n_plus, n_minus, kappa):
    labeled = np.arange(n_plus + n_minus)
    labels = np.r_[np.ones(n_plus), -np.ones(n_minus)]
    return LabeledGraph(complete_graph(n), labeled, labels, kappa)


def _random_graph(rng, n, p=0.3):
    W = rng.random((n, n)) * (rng.random((n, n)) < p)
    W = np.triu(W, 1)
    W = W + W.T
    # A Hamiltonian path keeps it connected.
    for i in range(n - 1):
        W[i, i + 1] = W[i + 1, i] = max(W[i, i + 1], 0.1)
    return W


class TestSolve:
    def test_path_harmonic(self):
        eta = solve_graph_interpolant(LabeledGraph(PATH, [0, 2], [0.0, 1.0], 0.0))
        assert eta.values == pytest.approx([0.0, 0.5, 1.0])

    def test_path_kappa_one(self):
        eta = solve_graph_interpolant(LabeledGraph(PATH, [0, 2], [0.0, 1.0], 1.0))
        assert eta.values[1] == pytest.approx(1 / 3)

    def test_complete_graph_closed_form(self):
        g = _complete_labeled(100, 7, 3, 1.0)
        eta = solve_graph_interpolant(g)
        assert np.max(np.abs(eta.values[10:] - fully_connected_eta(100, 7, 3, 1.0))) <= 1e-9
        assert np.array_equal(eta.values[:10], g.labels)

    @pytest.mark.parametrize("kappa", [0.0, 0.3, 2.0])
    def test_residual_and_labels(self, rng, kappa):
        W = _random_graph(rng, 60)
        labeled = rng.choice(60, 8, replace=False)
        y = rng.choice([-1.0, 1.0], 8)
        g = LabeledGraph(W, labeled, y, kappa)
        eta = solve_graph_interpolant(g)
        assert np.array_equal(eta.values[labeled], y)
        assert eta.residual(g) <= 1e-8

    def test_fixed_point_form(self, rng):
        W = _random_graph(rng, 30)
        g = LabeledGraph(W, [0, 1, 2], [1.0, -1.0, 0.5], 0.7)
        v = solve_graph_interpolant(g).values
        z = W.sum(axis=1)
        bar = W @ v / z
        U = np.setdiff1d(np.arange(30), [0, 1, 2])
        assert v[U] == pytest.approx(z[U] / (0.49 + z[U]) * bar[U], abs=1e-10)

    def test_jacobi_matches_direct(self, rng):
        W = _random_graph(rng, 80)
        g = LabeledGraph(W, [0, 40, 79], [1.0, -1.0, 1.0], 0.5)
        a = solve_graph_interpolant(g, method="direct").values
        b = solve_graph_interpolant(g, method="jacobi", tol=1e-12).values
        assert b == pytest.approx(a, abs=1e-9)

    def test_maximum_principle(self, rng):
        for _ in range(5):
            W = _random_graph(rng, 40)
            lab = rng.choice(40, 5, replace=False)
            y = rng.normal(size=5)
            v = solve_graph_interpolant(LabeledGraph(W, lab, y, 0.0)).values
            assert np.all((v >= y.min() - 1e-12) & (v <= y.max() + 1e-12))

    def test_singular_component(self):
        W = np.zeros((4, 4))
        W[0, 1] = W[1, 0] = W[2, 3] = W[3, 2] = 1.0
        with pytest.raises(SingularSystem):
            solve_graph_interpolant(LabeledGraph(W, [0], [1.0], 0.0))
        # Positive kappa regularizes the unlabeled component to zero.
        v = solve_graph_interpolant(LabeledGraph(W, [0], [1.0], 1.0)).values
        assert v[2:] == pytest.approx([0.0, 0.0])

    def test_negative_kappa(self):
        with pytest.raises(NegativeKappa):
            LabeledGraph(PATH, [0], [1.0], -1.0)

    def test_asymmetric_rejected(self):
        W = PATH.copy()
        W[0, 1] = 2.0
        with pytest.raises(ValueError):
            LabeledGraph(W, [0], [1.0], 0.0)


class TestClosedForm:
    def test_examples(self):
        assert fully_connected_eta(100, 7, 3, 1.0) == pytest.approx(4 / 11, abs=1e-12)
        assert fully_connected_eta(100, 7, 3, 0.0) == pytest.approx(0.4)
        assert fully_connected_eta(100, 5, 5, 0.3) == 0.0

    def test_no_labels(self):
        with pytest.raises(NoLabels):
            fully_connected_eta(10, 0, 0, 1.0)

    @settings(max_examples=50, deadline=None)
    @given(
        n_plus=st.integers(0, 20),
        n_minus=st.integers(0, 20),
        k1=st.floats(0, 10),
        k2=st.floats(0, 10),
    )
    def test_shrinkage_monotone(self, n_plus, n_minus, k1, k2):
        if n_plus == n_minus or abs(k1 - k2) < 1e-3:
            return
        lo, hi = sorted((k1, k2))
        a = abs(fully_connected_eta(100, n_plus, n_minus, lo))
        b = abs(fully_connected_eta(100, n_plus, n_minus, hi))
        assert b < a


class TestHoeffding:
    def test_examples(self):
        assert hoeffding_excess_bound(0.7, 50) == pytest.approx(math.exp(-4))
        assert hoeffding_excess_bound(0.5, 17) == 1.0
        assert hoeffding_excess_bound(1.0, 1) == pytest.approx(math.exp(-0.5))

    def test_monte_carlo(self):
        rng = np.random.default_rng(0)
        n_plus = rng.binomial(50, 0.7, size=100_000)
        miss = (n_plus < 50 - n_plus).astype(float)
        se = miss.std(ddof=1) / math.sqrt(miss.size)
        assert miss.mean() <= hoeffding_excess_bound(0.7, 50) + 3 * se


class TestIO:
    def test_edge_list_round_trip(self, tmp_path):
        (tmp_path / "g.txt").write_text("0 1 1.0\n1 0 1.0\n1 2 1\n# comment\n")
        (tmp_path / "y.txt").write_text("0 0\n2 1\n")
        W = read_edge_list(tmp_path / "g.txt")
        assert np.array_equal(W.toarray(), PATH)
        lab, y = read_labels(tmp_path / "y.txt")
        v = solve_graph_interpolant(LabeledGraph(W, lab, y, 0.0))
        text = v.to_csv()
        lines = text.splitlines()
        assert lines[0] == "vertex,eta_hat"
        rows = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
        assert np.abs(rows - [[0, 0.0], [1, 0.5], [2, 1.0]]).max() <= 1e-12

    def test_conflicting_weights(self, tmp_path):
        (tmp_path / "g.txt").write_text("0 1 1.0\n1 0 2.0\n")
        with pytest.raises(ValueError):
            read_edge_list(tmp_path / "g.txt")


def test_knn_graph_symmetric(rng):
    W = knn_graph(rng.random((50, 2)), 4).toarray()
    assert np.array_equal(W, W.T)
    assert np.all(np.diag(W) == 0)
    assert np.all((W > 0).sum(axis=1) >= 4)
