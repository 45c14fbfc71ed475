"""Synthetic binary problems with analytically known regression functions.

The marginal is uniform on a unit cube ``[0, 1]^d``, the unit ball, or the
standard simplex ``{x >= 0, sum(x) <= 1}``.  The regression function is one of

* ``constant``:         ``eta(x) = p``
* ``linear_boundary``:  ``eta(x) = 1/2 + h * sign(x_1 - 1/2)`` (hard margin ``h``)
* ``lipschitz_sine``:   ``eta(x) = 1/2 + a * sin(2 pi w x_1)`` (Lipschitz, ``A = 2 pi a w``)

Randomness comes from counter-based Philox streams keyed by
``(seed, *keys)``, so a trial's data never depends on scheduling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .dataset import LabeledDataset
from .exceptions import ConfigError, OutsideDomain

__all__ = [
    "SyntheticProblem",
    "BayesQuantities",
    "make_rng",
    "sample_points",
    "sample_dataset",
    "eta_eval",
    "bayes_quantities",
    "in_domain",
]

DOMAINS = ("cube", "ball", "simplex")
ETA_KINDS = ("constant", "linear_boundary", "lipschitz_sine")
_DOMAIN_TOL = 1e-12


def make_rng(seed, *keys):
    """Independent Philox generator for the stream ``(seed, *keys)``."""
    if isinstance(seed, np.random.Generator):
        return seed
    entropy = [int(seed)] + [int(k) for k in keys]
    if any(e < 0 for e in entropy):
        raise ConfigError("seeds and stream keys must be non-negative integers")
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


@dataclass(frozen=True)
class SyntheticProblem:
    """Distribution of ``(X, Y)`` with known ``eta``.

    ``smoothness`` ``(A, alpha)`` and ``margin`` are descriptive metadata; they
    are derived from the parameters and not enforced at runtime.
    """

    dim: int = 2
    domain: str = "cube"
    eta_kind: str = "constant"
    p: float = 0.2
    h: float = 0.1
    amplitude: float = 0.3
    frequency: float = 1.0
    binary: bool = True
    noise_sd: float = 0.0
    regularity: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.dim < 1:
            raise ConfigError("dimension must be at least 1")
        if self.domain not in DOMAINS:
            raise ConfigError(f"domain must be one of {DOMAINS}, got {self.domain!r}")
        if self.eta_kind not in ETA_KINDS:
            raise ConfigError(f"eta_kind must be one of {ETA_KINDS}, got {self.eta_kind!r}")
        if self.eta_kind == "constant" and not 0 < self.p < 1:
            raise ConfigError("constant eta needs 0 < p < 1")
        if self.eta_kind == "linear_boundary" and not 0 <= self.h <= 0.5:
            raise ConfigError("linear boundary needs 0 <= h <= 1/2")
        if self.eta_kind == "lipschitz_sine" and not 0 <= self.amplitude <= 0.5:
            raise ConfigError("sine amplitude must lie in [0, 1/2]")

    @property
    def smoothness(self):
        """``(A, alpha)`` such that ``|eta(x) - eta(x')| <= A |x - x'|^alpha``."""
        if self.eta_kind == "constant":
            return (0.0, 1.0)
        if self.eta_kind == "lipschitz_sine":
            return (2 * math.pi * self.amplitude * self.frequency, 1.0)
        return (math.inf, 1.0)

    @property
    def margin(self):
        """Hard margin ``min |eta - 1/2|`` (``None`` when it is zero)."""
        if self.eta_kind == "constant":
            return abs(self.p - 0.5)
        if self.eta_kind == "linear_boundary":
            return self.h
        return None


@dataclass(frozen=True)
class BayesQuantities:
    bayes_risk: float
    nn_limit_risk: float
    noise_mse: float


def in_domain(problem, X, tol=_DOMAIN_TOL):
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if problem.domain == "cube":
        return np.all((X >= -tol) & (X <= 1 + tol), axis=1)
    if problem.domain == "ball":
        return np.einsum("ij,ij->i", X, X) <= 1 + tol
    return np.all(X >= -tol, axis=1) & (X.sum(axis=1) <= 1 + tol)


def _eta_first_coord(problem, x1):
    if problem.eta_kind == "constant":
        return np.full_like(x1, problem.p, dtype=float)
    if problem.eta_kind == "linear_boundary":
        return np.where(x1 > 0.5, 0.5 + problem.h, 0.5 - problem.h)
    return 0.5 + problem.amplitude * np.sin(2 * math.pi * problem.frequency * x1)


def eta_eval(problem, x):
    """Regression function ``E[Y | X = x]`` at one point or at each row."""
    X = np.asarray(x, dtype=float)
    single = X.ndim <= 1
    X = X.reshape(-1, problem.dim)
    if not np.all(in_domain(problem, X)):
        raise OutsideDomain(f"point outside the {problem.domain} domain")
    vals = _eta_first_coord(problem, X[:, 0])
    return float(vals[0]) if single else vals


def sample_points(problem, n, rng):
    """``n`` uniform points on the domain (rejection from the bounding cube)."""
    d = problem.dim
    if problem.domain == "cube":
        return rng.random((n, d))
    lo = -1.0 if problem.domain == "ball" else 0.0
    out = np.empty((0, d))
    while out.shape[0] < n:
        need = n - out.shape[0]
        batch = lo + (1.0 - lo) * rng.random((max(2 * need, 64), d))
        keep = batch[in_domain(problem, batch, tol=0.0)]
        out = np.vstack([out, keep[:need]])
    return out


def sample_labels(problem, X, rng):
    eta = eta_eval(problem, X)
    if problem.binary:
        return (rng.random(eta.shape[0]) < eta).astype(float)
    return eta + problem.noise_sd * rng.standard_normal(eta.shape[0])


def sample_dataset(problem, n, seed, *keys):
    """iid sample of size ``n``; ``(problem, n, seed, keys)`` fixes it bit for bit."""
    if n < 1:
        raise ConfigError("n must be at least 1")
    rng = make_rng(seed, *keys)
    X = sample_points(problem, n, rng)
    y = sample_labels(problem, X, rng)
    return LabeledDataset(X, y, problem.binary)


def _first_coord_density(problem):
    d = problem.dim
    if problem.domain == "cube":
        return (0.0, 1.0), (lambda t: 1.0)
    if problem.domain == "ball":
        norm = math.gamma(d / 2 + 1) / (math.sqrt(math.pi) * math.gamma((d + 1) / 2))
        return (-1.0, 1.0), (lambda t: norm * (1 - t * t) ** ((d - 1) / 2))
    return (0.0, 1.0), (lambda t: d * (1 - t) ** (d - 1))


def bayes_quantities(problem, tol=1e-6):
    """Bayes risk ``E[min(eta, 1-eta)]``, 1-NN limit ``E[2 eta (1-eta)]`` and ``E[eta (1-eta)]``."""
    if not problem.binary:
        raise ConfigError("Bayes quantities are defined for binary problems")
    if problem.eta_kind in ("constant", "linear_boundary"):
        e = problem.p if problem.eta_kind == "constant" else 0.5 - problem.h
        return BayesQuantities(min(e, 1 - e), 2 * e * (1 - e), e * (1 - e))

    (lo, hi), dens = _first_coord_density(problem)
    w = problem.frequency
    # eta crosses 1/2 where sin(2 pi w t) = 0.
    breaks = [j / (2 * w) for j in range(math.floor(2 * w * lo), math.ceil(2 * w * hi) + 1)]
    breaks = [b for b in breaks if lo < b < hi]

    def expect(g):
        f = lambda t: g(float(_eta_first_coord(problem, np.array([t]))[0])) * dens(t)
        val, _ = integrate.quad(
            f, lo, hi, points=breaks or None, epsabs=tol * 1e-3, epsrel=tol * 1e-3, limit=500
        )
        return val

    return BayesQuantities(
        expect(lambda e: min(e, 1 - e)),
        expect(lambda e: 2 * e * (1 - e)),
        expect(lambda e: e * (1 - e)),
    )
