import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import linprog

from interp_learn.exceptions import Infeasible, Unbounded
from interp_learn.lp import LinearProgram, solve_small_lp, solve_standard_form


def test_single_constraint():
    sol = solve_small_lp(LinearProgram([1.0], [[1.0]], [3.0]))
    assert sol.x == pytest.approx([3.0])
    assert sol.objective == pytest.approx(3.0)
    assert sol.tight.tolist() == [0]


def test_three_constraints_vertex_enumeration():
    # Vertices of {v1<=1, v2<=2, v1+v2<=2.5} bounding the objective:
    # (1, 1.5) -> 2.5 and (0.5, 2) -> 2.5; both on constraint 2.
    sol = solve_small_lp(LinearProgram([1.0, 1.0], [[1, 0], [0, 1], [1, 1]], [1, 2, 2.5]))
    assert sol.objective == pytest.approx(2.5)
    assert 2 in sol.tight
    A = np.array([[1, 0], [0, 1], [1, 1]])
    assert np.all(A @ sol.x <= np.array([1, 2, 2.5]) + 1e-9)


def test_no_constraints_is_unbounded():
    with pytest.raises(Unbounded):
        solve_small_lp(LinearProgram([1.0], np.zeros((0, 1)), []))


def test_unbounded_direction():
    with pytest.raises(Unbounded):
        solve_small_lp(LinearProgram([1.0, 1.0], [[1.0, 0.0]], [1.0]))


def test_infeasible():
    with pytest.raises(Infeasible):
        solve_small_lp(LinearProgram([1.0], [[1.0], [-1.0]], [-1.0, -1.0]))


def test_beale_cycling_example_terminates():
    # Beale's example cycles under the largest-coefficient rule.
    c = [0.75, -20.0, 0.5, -6.0]
    A = [[0.25, -8.0, -1.0, 9.0], [0.5, -12.0, -0.5, 3.0], [0.0, 0.0, 1.0, 0.0]]
    b = [0.0, 0.0, 1.0]
    A_full = np.vstack([A, -np.eye(4)])
    b_full = np.concatenate([b, np.zeros(4)])
    sol = solve_small_lp(LinearProgram(c, A_full, b_full))
    ref = linprog(-np.array(c), A_ub=A, b_ub=b, method="highs")
    assert sol.objective == pytest.approx(-ref.fun, abs=1e-12)
    assert sol.x == pytest.approx([1.0, 0.0, 1.0, 0.0], abs=1e-12)


def test_rejects_non_finite():
    with pytest.raises(ValueError):
        LinearProgram([np.nan], [[1.0]], [1.0])


def test_standard_form_redundant_row():
    # Second row duplicates the first.
    M = np.array([[1.0, 1.0, 0.0], [1.0, 1.0, 0.0], [0.0, 1.0, 1.0]])
    res = solve_standard_form(M, [1.0, 1.0, 1.0], [1.0, 2.0, 0.5])
    assert res.status == "optimal"
    lam = np.zeros(3)
    lam[res.basis] = res.values
    assert M @ lam == pytest.approx([1.0, 1.0, 1.0])
    assert np.all(lam >= -1e-12)


@settings(max_examples=150, deadline=None)
@given(
    m=st.integers(1, 4),
    n_c=st.integers(1, 12),
    seed=st.integers(0, 2**32 - 1),
)
def test_matches_linprog(m, n_c, seed):
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(n_c, m))
    b = rng.normal(size=n_c) + 0.5
    c = rng.normal(size=m)
    ref = linprog(-c, A_ub=A, b_ub=b, bounds=[(None, None)] * m, method="highs")
    if ref.status == 2:
        with pytest.raises(Infeasible):
            solve_small_lp(LinearProgram(c, A, b))
    elif ref.status == 3:
        with pytest.raises(Unbounded):
            solve_small_lp(LinearProgram(c, A, b))
    else:
        sol = solve_small_lp(LinearProgram(c, A, b))
        assert sol.objective == pytest.approx(-ref.fun, rel=1e-7, abs=1e-7)
        assert np.all(A @ sol.x <= b + 1e-7)
        # A vertex: the tight rows span R^m.
        assert np.linalg.matrix_rank(A[sol.tight]) == m
