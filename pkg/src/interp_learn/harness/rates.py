"""Log-log regression of error against sample size."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..exceptions import ConfigError, NonPositiveValue


@dataclass(frozen=True)
class RateFit:
    slope: float
    intercept: float
    r2: float

    def predict(self, n):
        return np.exp(self.intercept) * np.asarray(n, dtype=float) ** self.slope


def fit_rate(points):
    """OLS fit of ``log(error) = intercept + slope * log(n)``.

    ``points`` is an iterable of ``(n, error)`` pairs with positive entries.
    """
    pts = np.asarray(list(points), dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 2:
        raise ConfigError("fit_rate needs at least two (n, error) pairs")
    if np.any(pts <= 0) or not np.all(np.isfinite(pts)):
        raise NonPositiveValue("sample sizes and errors must be positive and finite")
    x, y = np.log(pts[:, 0]), np.log(pts[:, 1])
    if np.ptp(x) == 0:
        raise ConfigError("fit_rate needs at least two distinct sample sizes")
    xc = x - x.mean()
    slope = float(xc @ (y - y.mean()) / (xc @ xc))
    intercept = float(y.mean() - slope * x.mean())
    resid = y - (intercept + slope * x)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 if ss_tot == 0 else 1.0 - float(resid @ resid) / ss_tot
    return RateFit(slope, intercept, r2)
