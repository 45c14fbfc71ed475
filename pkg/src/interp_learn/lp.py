"""Dense simplex method for small linear programs.

The programs handled here have few variables (``m <= d + 2``) but possibly
many inequality constraints, e.g. one per training point.  Such a program

    maximize    c . v
    subject to  A v <= b,     v free

is solved through its dual in standard form,

    minimize    b . lam
    subject to  A^T lam = c,  lam >= 0,

which has only ``m`` equality rows.  A revised simplex method with Bland's
smallest-index rule walks the dual bases; every dual basis is a set of ``m``
constraints of the primal and the dual prices of an optimal basis are the
primal vertex.  Basis matrices are refactorized from the original data at
every iteration, so no rounding error accumulates in a tableau.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import Infeasible, Unbounded

TOL = 1e-9

__all__ = [
    "LinearProgram",
    "LPSolution",
    "StandardFormResult",
    "solve_small_lp",
    "solve_standard_form",
]


@dataclass(frozen=True)
class LinearProgram:
    """``maximize objective . v`` subject to ``constraint_matrix @ v <= constraint_rhs``."""

    objective: np.ndarray
    constraint_matrix: np.ndarray
    constraint_rhs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.objective, dtype=float).reshape(-1)
        A = np.asarray(self.constraint_matrix, dtype=float)
        b = np.asarray(self.constraint_rhs, dtype=float).reshape(-1)
        if A.size == 0:
            A = A.reshape(0, c.size)
        if A.ndim != 2 or A.shape[1] != c.size or A.shape[0] != b.size:
            raise ValueError(
                f"inconsistent LP shapes: objective {c.shape}, "
                f"matrix {A.shape}, rhs {b.shape}"
            )
        if c.size < 1:
            raise ValueError("LP needs at least one variable")
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
            raise ValueError("LP data must be finite")
        object.__setattr__(self, "objective", c)
        object.__setattr__(self, "constraint_matrix", A)
        object.__setattr__(self, "constraint_rhs", b)


@dataclass(frozen=True)
class LPSolution:
    x: np.ndarray
    objective: float
    tight: np.ndarray
    basis: np.ndarray
    multipliers: np.ndarray
    iterations: int


@dataclass(frozen=True)
class StandardFormResult:
    """Outcome of ``min cost . lam  s.t.  M lam = rhs, lam >= 0``.

    ``status`` is one of ``"optimal"``, ``"infeasible"`` or ``"unbounded"``.
    For an optimal result ``basis`` holds the basic columns, ``values`` their
    levels and ``prices`` the simplex multipliers of the kept rows
    (``rows``; redundant equality rows are dropped during phase one).
    """

    status: str
    basis: np.ndarray
    values: np.ndarray
    prices: np.ndarray
    rows: np.ndarray
    infeasibility: float
    iterations: int


def _bland_simplex(M, rhs, cost, basis, allowed, tol, max_iter):
    """Revised primal simplex with Bland's rule, starting from a feasible basis.

    Only columns flagged in ``allowed`` may enter.  Returns
    ``(status, basis, x_B, prices, iterations)``.
    """
    basis = list(basis)
    it = 0
    while True:
        B = M[:, basis]
        x_B = np.linalg.solve(B, rhs)
        np.maximum(x_B, 0.0, out=x_B)
        prices = np.linalg.solve(B.T, cost[basis])
        reduced = cost - prices @ M
        reduced[basis] = 0.0
        entering = np.flatnonzero((reduced < -tol) & allowed)
        if entering.size == 0:
            return "optimal", basis, x_B, prices, it
        if it >= max_iter:
            raise RuntimeError(f"simplex did not terminate within {max_iter} pivots")
        j = int(entering[0])
        direction = np.linalg.solve(B, M[:, j])
        rows = np.flatnonzero(direction > tol)
        if rows.size == 0:
            return "unbounded", basis, x_B, prices, it
        ratios = x_B[rows] / direction[rows]
        best = ratios.min()
        ties = rows[ratios <= best + tol * max(1.0, abs(best))]
        leave = min(ties, key=lambda r: basis[r])
        basis[leave] = j
        it += 1


def solve_standard_form(M, rhs, cost, tol=TOL, max_iter=None):
    """Two-phase simplex for ``min cost . lam  s.t.  M lam = rhs, lam >= 0``.

    Phase one starts from an artificial identity basis (signs chosen so the
    start is feasible) and minimizes the total artificial level.
    """
    M = np.asarray(M, dtype=float)
    rhs = np.asarray(rhs, dtype=float).copy()
    cost = np.asarray(cost, dtype=float)
    m, n = M.shape
    if max_iter is None:
        max_iter = 50 * (n + m) + 1000

    signs = np.where(rhs < 0, -1.0, 1.0)
    M1 = np.hstack([M, np.diag(signs)])
    cost1 = np.concatenate([np.zeros(n), np.ones(m)])
    allowed = np.ones(n + m, dtype=bool)
    basis0 = list(range(n, n + m))
    status, basis, x_B, _, it1 = _bland_simplex(
        M1, rhs, cost1, basis0, allowed, tol, max_iter
    )
    infeas = float(sum(x for b, x in zip(basis, x_B) if b >= n))
    rows = np.arange(m)
    if infeas > tol:
        return StandardFormResult(
            "infeasible", np.array(basis), x_B, np.zeros(m), rows, infeas, it1
        )

    # Drive zero-level artificials out of the basis; drop redundant rows.
    keep_rows = list(range(m))
    basis = list(basis)
    r = 0
    while r < len(basis):
        if basis[r] < n:
            r += 1
            continue
        B = M1[np.ix_(keep_rows, basis)]
        row_r = np.linalg.solve(B.T, np.eye(len(basis))[r]) @ M1[keep_rows, :n]
        row_r[[b for b in basis if b < n]] = 0.0
        cand = np.flatnonzero(np.abs(row_r) > tol)
        if cand.size:
            basis[r] = int(cand[0])
            r += 1
        else:
            # The artificial's row is a combination of the others.
            art_row = basis[r] - n
            keep_rows.remove(art_row)
            del basis[r]
            r = 0
    M2 = M[keep_rows]
    rhs2 = rhs[keep_rows]
    allowed = np.ones(n, dtype=bool)
    if len(basis) == 0:
        return StandardFormResult(
            "optimal", np.array([], dtype=int), np.zeros(0), np.zeros(0),
            np.array(keep_rows, dtype=int), infeas, it1,
        )
    status, basis, x_B, prices, it2 = _bland_simplex(
        M2, rhs2, cost, basis, allowed, tol, max_iter
    )
    return StandardFormResult(
        status, np.array(basis, dtype=int), x_B, prices,
        np.array(keep_rows, dtype=int), infeas, it1 + it2,
    )


def _primal_feasible(A, b, tol):
    # Farkas: A v <= b is infeasible iff some lam >= 0 has A^T lam = 0, b . lam < 0.
    n_c, m = A.shape
    M = np.vstack([A.T, np.ones((1, n_c))])
    rhs = np.concatenate([np.zeros(m), [1.0]])
    res = solve_standard_form(M, rhs, b, tol)
    if res.status != "optimal":
        return True
    return float(b[res.basis] @ res.values) >= -tol


def solve_small_lp(lp: LinearProgram, tol: float = TOL) -> LPSolution:
    """Maximize ``lp.objective . v`` subject to ``A v <= b`` with ``v`` free.

    Returns a vertex-optimal point, its objective value and the indices of the
    constraints tight within ``tol``.  Raises :class:`Infeasible` or
    :class:`Unbounded`.
    """
    c, A, b = lp.objective, lp.constraint_matrix, lp.constraint_rhs
    n_c, m = A.shape
    if n_c == 0:
        if np.any(c != 0):
            raise Unbounded("objective is unbounded: no constraints")
        z = np.zeros(m)
        return LPSolution(z, 0.0, np.array([], dtype=int), np.array([], dtype=int),
                          np.zeros(0), 0)

    res = solve_standard_form(A.T, c, b, tol)
    if res.status == "infeasible":
        # The dual has no feasible point: primal infeasible or unbounded.
        if _primal_feasible(A, b, tol):
            raise Unbounded("objective is unbounded above")
        raise Infeasible("constraints are infeasible")
    if res.status == "unbounded":
        raise Infeasible("constraints are infeasible")

    basis = res.basis
    if len(basis) == m:
        x = np.linalg.solve(A[basis], b[basis])
    else:
        x = np.linalg.lstsq(A[basis], b[basis], rcond=None)[0]
    slack = b - A @ x
    tight = np.flatnonzero(np.abs(slack) <= tol)
    return LPSolution(
        x=x,
        objective=float(c @ x),
        tight=tight,
        basis=basis,
        multipliers=res.values,
        iterations=res.iterations,
    )
