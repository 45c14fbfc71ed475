"""Interpolating predictors behind a scikit-learn compatible interface.

Each estimator has a functional core (``winn_predict``, ``simplicial_predict``,
``knn_baseline_predict``, ``plugin_classify``) and a thin estimator class
that validates input, stores the fitted state and loops over queries.

wiNN prediction at ``x`` is the weighted mean of the ``k`` nearest labels
with weights ``phi(|x - x_(i)| / |x - x_(k+1)|)`` for a singular ``phi``; the
prediction at a training point is that point's label.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, RegressorMixin, clone
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .exceptions import ConfigError, DegenerateConfiguration, KTooLarge, NonPositiveArgument, OutsideHull
from .geometry import locate_delaunay_cell
from .neighbors import build_index

__all__ = [
    "WeightFunction",
    "EstimatorConfig",
    "phi_eval",
    "winn_predict",
    "simplicial_predict",
    "knn_baseline_predict",
    "plugin_classify",
    "default_k",
    "SimplicialInterpolator",
    "WiNNRegressor",
    "HilbertKernelRegressor",
    "KNNRegressor",
    "PluginClassifier",
]

EXACT_HIT = 1e-12


@dataclass(frozen=True)
class WeightFunction:
    """Singular radial profile: ``t**-delta`` (``"power"``) or ``-log t`` (``"neglog"``)."""

    kind: str = "power"
    delta: float = 1.0

    def __post_init__(self):
        if self.kind not in ("power", "neglog"):
            raise ConfigError(f"unknown weight kind {self.kind!r}")
        if self.kind == "power" and not self.delta > 0:
            raise ConfigError("power-law weight needs delta > 0")

    def __call__(self, t):
        return phi_eval(self, t)


def phi_eval(weight, t):
    """Evaluate the weight profile at ``t > 0`` (scalar or array)."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(~(t_arr > 0)):
        raise NonPositiveArgument("phi is only defined for t > 0")
    if weight.kind == "power":
        out = t_arr ** (-weight.delta)
    else:
        out = -np.log(t_arr)
    return float(out) if out.ndim == 0 else out


def default_k(n, d, alpha=1.0):
    """``ceil(n ** (2 alpha / (2 alpha + d)))``, clipped to ``[1, n - 1]``."""
    k = math.ceil(n ** (2.0 * alpha / (2.0 * alpha + d)))
    return max(1, min(k, n - 1))


def _winn_from_neighbors(labels, idx, dist, k, weight):
    """wiNN values for rows of ``k + 1`` sorted neighbors per query."""
    out = np.empty(idx.shape[0])
    for r in range(idx.shape[0]):
        d_r = dist[r]
        if d_r[0] <= EXACT_HIT:
            hits = idx[r][d_r <= EXACT_HIT]
            out[r] = labels[hits.min()]
            continue
        nb = idx[r, :k]
        t = d_r[:k] / d_r[k]
        w = phi_eval(weight, t)
        y = labels[nb]
        s = w.sum()
        if s > 0 and np.isfinite(s):
            out[r] = (w @ y) / s
        else:
            # All neighbors on the (k+1)-st sphere with a -log profile.
            out[r] = y.mean()
    return out


def winn_predict(X, y, index, k, weight, query):
    """wiNN prediction(s) at ``query`` (one point or an array of rows)."""
    y = np.asarray(y, dtype=float)
    if k + 1 > index.n:
        raise KTooLarge(f"wiNN with k={k} needs at least {k + 1} training points")
    Q = np.asarray(query, dtype=float)
    single = Q.ndim <= 1 and Q.size == index.dim
    Q = Q.reshape(-1, index.dim)
    idx, dist = index.nearest(Q, k + 1)
    vals = _winn_from_neighbors(y, idx, dist, k, weight)
    return float(vals[0]) if single else vals


def simplicial_predict(X, y, query, outside_hull_value=0.5):
    """Simplicial interpolation at one query point."""
    X = np.asarray(X, dtype=float)
    q = np.asarray(query, dtype=float).reshape(-1)
    try:
        cell = locate_delaunay_cell(X, q)
    except OutsideHull:
        return float(outside_hull_value)
    w = cell.barycentric(q)
    return float(w @ np.asarray(y, dtype=float)[list(cell.vertex_indices)])


def knn_baseline_predict(X, y, index, k, query):
    """Unweighted mean of the ``k`` nearest labels (1-NN for ``k = 1``)."""
    if k > index.n:
        raise KTooLarge(f"k={k} exceeds the {index.n} training points")
    Q = np.asarray(query, dtype=float)
    single = Q.ndim <= 1 and Q.size == index.dim
    Q = Q.reshape(-1, index.dim)
    idx, _ = index.nearest(Q, k)
    vals = np.asarray(y, dtype=float)[idx].mean(axis=1)
    return float(vals[0]) if single else vals


def plugin_classify(eta_hat):
    """``1`` where the regression estimate is strictly above 1/2, else ``0``."""
    out = (np.asarray(eta_hat, dtype=float) > 0.5).astype(int)
    return int(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# scikit-learn estimators
# ---------------------------------------------------------------------------


def _check_spanning(X):
    centered = X - X.mean(axis=0)
    if X.shape[0] < X.shape[1] + 1 or np.linalg.matrix_rank(centered) < X.shape[1]:
        raise DegenerateConfiguration("training points do not affinely span R^d")


class SimplicialInterpolator(RegressorMixin, BaseEstimator):
    """Piecewise-linear interpolation over the Delaunay triangulation.

    Parameters
    ----------
    outside_hull_value : float, default=0.5
        Prediction for queries outside the convex hull of the training points.
    """

    def __init__(self, outside_hull_value=0.5):
        self.outside_hull_value = outside_hull_value

    def fit(self, X, y):
        X, y = check_X_y(X, y, dtype=float, y_numeric=True)
        _check_spanning(X)
        self.X_ = X
        self.y_ = y.astype(float)
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X):
        check_is_fitted(self)
        Q = check_array(X, dtype=float)
        if Q.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {Q.shape[1]} features, expected {self.n_features_in_}")
        return np.array(
            [simplicial_predict(self.X_, self.y_, q, self.outside_hull_value) for q in Q]
        )


class WiNNRegressor(RegressorMixin, BaseEstimator):
    """Weighted & interpolated nearest neighbors.

    Parameters
    ----------
    k : int or None
        Number of neighbors averaged.  ``None`` uses
        ``ceil(n ** (2 alpha / (2 alpha + d)))``.
    weight : {"power", "neglog"}
        ``phi(t) = t ** -delta`` or ``phi(t) = -log t``.
    delta : float or None
        Power-law exponent; ``None`` means ``d / 4``.
    alpha : float
        Smoothness exponent used only for the default ``k``.
    """

    def __init__(self, k=None, weight="power", delta=None, alpha=1.0):
        self.k = k
        self.weight = weight
        self.delta = delta
        self.alpha = alpha

    def _resolve(self, n, d):
        k = default_k(n, d, self.alpha) if self.k is None else int(self.k)
        delta = d / 4.0 if self.delta is None else float(self.delta)
        return k, delta

    def fit(self, X, y):
        X, y = check_X_y(X, y, dtype=float, y_numeric=True)
        n, d = X.shape
        k, delta = self._resolve(n, d)
        if k < 1:
            raise ConfigError("k must be at least 1")
        if k + 1 > n:
            raise KTooLarge(f"k={k} needs at least {k + 1} training points, got {n}")
        self.k_ = k
        self.weight_ = WeightFunction(self.weight, delta)
        if self.weight == "power" and not 0 < delta < d / 2 and not self._exempt_delta_warning():
            warnings.warn(
                f"delta={delta} is outside (0, d/2) = (0, {d / 2}); "
                "consistency guarantees do not apply",
                stacklevel=2,
            )
        self.X_ = X
        self.y_ = y.astype(float)
        self.index_ = build_index(X)
        self.n_features_in_ = d
        return self

    def _exempt_delta_warning(self):
        return False

    def predict(self, X):
        check_is_fitted(self)
        Q = check_array(X, dtype=float)
        return winn_predict(self.X_, self.y_, self.index_, self.k_, self.weight_, Q)


class HilbertKernelRegressor(WiNNRegressor):
    """The non-adaptive special case ``k = n - 1``, ``phi(t) = t ** -d``."""

    def __init__(self):
        super().__init__(k=None, weight="power", delta=None)

    def _resolve(self, n, d):
        return n - 1, float(d)

    def _exempt_delta_warning(self):
        return True


class KNNRegressor(RegressorMixin, BaseEstimator):
    """Unweighted ``k``-nearest-neighbor average; interpolating only for ``k = 1``."""

    def __init__(self, n_neighbors=1):
        self.n_neighbors = n_neighbors

    def fit(self, X, y):
        X, y = check_X_y(X, y, dtype=float, y_numeric=True)
        if not 1 <= self.n_neighbors <= X.shape[0]:
            raise KTooLarge(f"n_neighbors={self.n_neighbors} with {X.shape[0]} points")
        self.X_ = X
        self.y_ = y.astype(float)
        self.index_ = build_index(X)
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X):
        check_is_fitted(self)
        Q = check_array(X, dtype=float)
        return knn_baseline_predict(self.X_, self.y_, self.index_, self.n_neighbors, Q)


class PluginClassifier(ClassifierMixin, BaseEstimator):
    """Threshold a regression estimate of ``P(Y = 1 | x)`` at 1/2."""

    def __init__(self, regressor=None):
        self.regressor = regressor

    def fit(self, X, y):
        X, y = check_X_y(X, y, dtype=float)
        if not np.all((y == 0) | (y == 1)):
            raise ValueError("PluginClassifier expects labels in {0, 1}")
        base = self.regressor if self.regressor is not None else WiNNRegressor()
        self.regressor_ = clone(base).fit(X, y)
        self.classes_ = np.array([0, 1])
        self.n_features_in_ = X.shape[1]
        return self

    def decision_function(self, X):
        check_is_fitted(self)
        return self.regressor_.predict(X)

    def predict(self, X):
        return plugin_classify(self.decision_function(X))


@dataclass(frozen=True)
class EstimatorConfig:
    """Declarative description of a predictor, resolved against a dataset at build time.

    ``scheme`` is one of ``"simplicial"``, ``"winn"``, ``"hilbert"``, ``"knn"``.
    """

    scheme: str = "winn"
    k: int | None = None
    weight: str = "power"
    delta: float | None = None
    alpha: float = 1.0
    outside_hull_value: float = 0.5

    def __post_init__(self):
        if self.scheme not in ("simplicial", "winn", "hilbert", "knn"):
            raise ConfigError(f"unknown scheme {self.scheme!r}")
        if self.k is not None and self.k < 1:
            raise ConfigError("k must be at least 1")
        if self.scheme == "knn" and self.k is None:
            raise ConfigError("the knn scheme needs an explicit k")

    def make(self):
        """A fresh, unfitted estimator for this configuration."""
        if self.scheme == "simplicial":
            return SimplicialInterpolator(self.outside_hull_value)
        if self.scheme == "winn":
            return WiNNRegressor(k=self.k, weight=self.weight, delta=self.delta, alpha=self.alpha)
        if self.scheme == "hilbert":
            return HilbertKernelRegressor()
        return KNNRegressor(n_neighbors=self.k)
