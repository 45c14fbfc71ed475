"""One-dimensional interpolants that reduce to linear interpolation.

* the minimum-norm interpolant for the Laplace kernel ``exp(-kappa |x - z|)``,
  which tends to piecewise-linear interpolation as ``kappa -> 0``;
* the expectation of a random threshold stump fitted to threshold-consistent
  labels (the infinite-forest limit of a PERT-style ensemble).
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from ..exceptions import ConfigError, NonMonotoneLabels, SingularKernelMatrix

__all__ = ["laplace1d_interpolant", "pert1d_expectation", "pert1d_forest"]

_MAX_COND = 1e14


def laplace1d_interpolant(x, y, kappa, query):
    """Evaluate ``sum_i a_i exp(-kappa |x_i - q|)`` with ``K a = y``."""
    x = np.asarray(x, dtype=float).reshape(-1)
    y = np.asarray(y, dtype=float).reshape(-1)
    if x.size != y.size or x.size == 0:
        raise ConfigError("x and y must be non-empty and of equal length")
    if not kappa > 0:
        raise ConfigError("kappa must be positive")
    if np.unique(x).size != x.size:
        raise SingularKernelMatrix("duplicate data points make the kernel matrix singular")
    K = np.exp(-kappa * np.abs(x[:, None] - x[None, :]))
    cond = np.linalg.cond(K)
    if not np.isfinite(cond) or cond > _MAX_COND:
        raise SingularKernelMatrix(f"kernel matrix condition number {cond:.3g}")
    coef = scipy.linalg.solve(K, y, assume_a="pos")
    q = np.asarray(query, dtype=float)
    vals = np.exp(-kappa * np.abs(q.reshape(-1)[:, None] - x[None, :])) @ coef
    return float(vals[0]) if q.ndim == 0 else vals.reshape(q.shape)


def _threshold_split(x, y):
    order = np.argsort(x, kind="stable")
    xs, ys = x[order], y[order]
    if not np.all((ys == 0) | (ys == 1)):
        raise ConfigError("labels must be 0 or 1")
    if np.unique(xs).size != xs.size:
        raise ConfigError("data points must be distinct")
    steps = np.flatnonzero(np.diff(ys) != 0)
    if steps.size > 1:
        raise NonMonotoneLabels("labels change more than once along x")
    return xs, ys, steps


def pert1d_expectation(x, y, query):
    """Expected prediction of a stump ``1{x > t}`` (or ``1{x < t}``) with ``t`` uniform between the classes."""
    xs, ys, steps = _threshold_split(np.asarray(x, float).reshape(-1), np.asarray(y, float).reshape(-1))
    q = np.asarray(query, dtype=float)
    if steps.size == 0:
        out = np.full(q.shape, ys[0])
    else:
        i = steps[0]
        lo, hi = xs[i], xs[i + 1]
        frac = np.clip((q - lo) / (hi - lo), 0.0, 1.0)
        out = ys[i] + (ys[i + 1] - ys[i]) * frac
    return float(out) if out.ndim == 0 else out


def pert1d_forest(x, y, query, n_trees, rng):
    """Finite random-threshold ensemble; converges to :func:`pert1d_expectation`."""
    xs, ys, steps = _threshold_split(np.asarray(x, float).reshape(-1), np.asarray(y, float).reshape(-1))
    q = np.asarray(query, dtype=float).reshape(-1)
    if steps.size == 0:
        return np.full(q.shape, ys[0])
    i = steps[0]
    t = rng.uniform(xs[i], xs[i + 1], size=n_trees)
    above = (q[:, None] > t[None, :]).mean(axis=1)
    return ys[i] + (ys[i + 1] - ys[i]) * above
