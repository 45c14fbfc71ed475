"""Point location in the implicit Delaunay triangulation and simplex geometry.

No triangulation is ever built.  The Delaunay cell containing a query ``x``
is read off the optimal vertex of the lifted linear program

    maximize    a . x + b
    subject to  a . p_i + b <= |p_i|^2      for every point p_i,

whose constraints tight at the optimum are the vertices of a lower facet of
the points lifted onto the paraboloid, i.e. a Delaunay cell.  The program is
unbounded exactly when ``x`` lies outside the convex hull.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
import scipy.linalg

from .exceptions import (
    DegenerateConfiguration,
    DegenerateSimplex,
    OutsideHull,
    Unbounded,
)
from .lp import TOL, LinearProgram, solve_small_lp, solve_standard_form

MAX_CONDITION = 1e12

__all__ = [
    "SimplexCell",
    "barycentric_coordinates",
    "interpolate_simplex",
    "affine_fit_value",
    "locate_delaunay_cell",
    "hull_contains",
    "max_cell_diameter",
    "delaunay_lp",
    "MAX_CONDITION",
]


def _as_points(points):
    P = np.asarray(points, dtype=float)
    if P.ndim == 1:
        P = P[:, None]
    if P.ndim != 2 or P.shape[1] < 1:
        raise ValueError(f"points must be an (n, d) array, got shape {P.shape}")
    if not np.all(np.isfinite(P)):
        raise ValueError("points must be finite")
    return P


def _as_query(query, d):
    q = np.asarray(query, dtype=float).reshape(-1)
    if q.size != d:
        raise ValueError(f"query has dimension {q.size}, expected {d}")
    if not np.all(np.isfinite(q)):
        raise ValueError("query must be finite")
    return q


def _lifted(vertex_coords):
    V = np.asarray(vertex_coords, dtype=float)
    return np.hstack([np.ones((V.shape[0], 1)), V])


@dataclass(frozen=True)
class SimplexCell:
    """A non-degenerate simplex given by ``d + 1`` vertices of a point set.

    The LU factorization of the lifted matrix ``[1 | v_i]`` is computed once
    and reused for every barycentric solve.
    """

    vertex_indices: tuple
    vertex_coords: np.ndarray
    _lu: tuple = field(repr=False, compare=False, default=None)

    def __post_init__(self):
        V = np.asarray(self.vertex_coords, dtype=float)
        if V.ndim != 2 or V.shape[0] != V.shape[1] + 1:
            raise ValueError(f"a simplex in R^d needs d+1 vertices, got shape {V.shape}")
        if len(set(self.vertex_indices)) != len(self.vertex_indices) or len(
            self.vertex_indices
        ) != V.shape[0]:
            raise ValueError("vertex_indices must be d+1 distinct indices")
        lifted = _lifted(V)
        cond = np.linalg.cond(lifted)
        if not np.isfinite(cond) or cond > MAX_CONDITION:
            raise DegenerateSimplex(f"lifted vertex matrix has condition number {cond:.3g}")
        object.__setattr__(self, "vertex_coords", V)
        object.__setattr__(self, "vertex_indices", tuple(int(i) for i in self.vertex_indices))
        object.__setattr__(self, "_lu", scipy.linalg.lu_factor(lifted.T))

    @classmethod
    def from_points(cls, points, indices):
        P = _as_points(points)
        idx = tuple(int(i) for i in indices)
        return cls(idx, P[list(idx)])

    @property
    def dim(self):
        return self.vertex_coords.shape[1]

    def barycentric(self, query):
        """Barycentric weights of one query ``(d,)`` or of many ``(q, d)``."""
        Q = np.asarray(query, dtype=float)
        single = Q.ndim == 1
        Q = np.atleast_2d(Q)
        if Q.shape[1] != self.dim:
            raise ValueError(f"query has dimension {Q.shape[1]}, expected {self.dim}")
        rhs = np.hstack([np.ones((Q.shape[0], 1)), Q]).T
        W = scipy.linalg.lu_solve(self._lu, rhs).T
        return W[0] if single else W

    def diameter(self):
        V = self.vertex_coords
        diff = V[:, None, :] - V[None, :, :]
        return float(np.sqrt((diff ** 2).sum(-1)).max())

    def contains(self, query, tol=TOL):
        return bool(np.all(self.barycentric(query) >= -tol))


def barycentric_coordinates(cell, query):
    """Barycentric weights of ``query`` with respect to ``cell``.

    ``cell`` may be a :class:`SimplexCell` or a ``(d+1, d)`` array of vertex
    coordinates.
    """
    if not isinstance(cell, SimplexCell):
        V = np.asarray(cell, dtype=float)
        if V.ndim == 1:
            V = V[:, None]
        cell = SimplexCell(tuple(range(V.shape[0])), V)
    return cell.barycentric(query)


def interpolate_simplex(vertex_coords, labels, query):
    """Value at ``query`` of the affine function through the labeled vertices.

    Computed as the barycentric combination ``sum_i w_i y_i``.
    """
    y = np.asarray(labels, dtype=float)
    w = barycentric_coordinates(vertex_coords, query)
    return w @ y


def affine_fit_value(vertex_coords, labels, query):
    """Evaluate ``beta0 + x . beta`` where ``beta0 + v_i . beta = y_i``.

    Direct dense solve of the affine system; kept separate from the
    barycentric route so each can check the other.
    """
    V = np.asarray(vertex_coords, dtype=float)
    if V.ndim == 1:
        V = V[:, None]
    coef = np.linalg.solve(_lifted(V), np.asarray(labels, dtype=float))
    q = np.asarray(query, dtype=float)
    return coef[0] + q @ coef[1:]


def delaunay_lp(points, query):
    """The lifted point-location program for ``query`` (variables ``(a, b)``)."""
    P = _as_points(points)
    q = _as_query(query, P.shape[1])
    A = np.hstack([P, np.ones((P.shape[0], 1))])
    rhs = np.einsum("ij,ij->i", P, P)
    return LinearProgram(np.append(q, 1.0), A, rhs)


def locate_delaunay_cell(points, query, tol=TOL):
    """Delaunay cell of ``points`` containing ``query``.

    When more than ``d + 1`` constraints are tight (cospherical points, or a
    query on a shared face) the lexicographically smallest index subset whose
    simplex is non-degenerate and contains the query is chosen.

    Raises :class:`OutsideHull` if the query is outside the convex hull and
    :class:`DegenerateConfiguration` if no valid cell can be formed.
    """
    P = _as_points(points)
    n, d = P.shape
    if n < d + 1:
        raise DegenerateConfiguration(f"need at least d+1={d + 1} points, got {n}")
    q = _as_query(query, d)
    try:
        sol = solve_small_lp(delaunay_lp(P, q), tol=tol)
    except Unbounded:
        raise OutsideHull(f"query {q} lies outside the convex hull") from None

    tight = np.sort(sol.tight)
    if len(tight) > d + 1:
        candidates = combinations(tight.tolist(), d + 1)
    else:
        candidates = [tuple(sorted(sol.basis.tolist()))]
    for subset in candidates:
        try:
            cell = SimplexCell(subset, P[list(subset)])
        except DegenerateSimplex:
            continue
        if cell.contains(q, tol):
            return cell
    raise DegenerateConfiguration(
        f"no non-degenerate cell among tight constraints {tight.tolist()} contains {q}"
    )


def hull_contains(points, query, tol=TOL):
    """Whether ``query`` lies in the closed convex hull of ``points``.

    Decided by feasibility of ``w >= 0, sum(w) = 1, sum_i w_i p_i = query``.
    """
    P = _as_points(points)
    n, d = P.shape
    if n < 1:
        raise ValueError("need at least one point")
    q = _as_query(query, d)
    M = np.vstack([P.T, np.ones((1, n))])
    rhs = np.append(q, 1.0)
    res = solve_standard_form(M, rhs, np.zeros(n), tol)
    return res.status != "infeasible"


def max_cell_diameter(points, probes, tol=TOL):
    """Largest diameter among the Delaunay cells located at ``probes``.

    A lower bound on the maximum cell diameter of the whole triangulation.
    """
    P = _as_points(points)
    Q = np.asarray(probes, dtype=float)
    if Q.ndim == 1:
        Q = Q[:, None] if P.shape[1] == 1 else Q[None, :]
    best = 0.0
    seen = set()
    for q in Q:
        cell = locate_delaunay_cell(P, q, tol)
        if cell.vertex_indices in seen:
            continue
        seen.add(cell.vertex_indices)
        best = max(best, cell.diameter())
    return best
