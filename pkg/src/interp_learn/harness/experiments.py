"""Geometric experiments: adversarial-set density, the noisy-simplex demo and hull miss mass."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from ..estimators import EstimatorConfig, plugin_classify
from ..exceptions import ConfigError
from ..geometry import SimplexCell, hull_contains
from ..synthetic import eta_eval, in_domain, make_rng, sample_dataset, sample_points
from .montecarlo import Estimate

__all__ = [
    "AdversarialResult",
    "domain_grid",
    "adversarial_density",
    "regular_simplex",
    "simplex_noise_demo",
    "hull_miss_mass",
]


@dataclass(frozen=True)
class AdversarialResult:
    covered_fraction: float
    adversarial_mass: float
    adversarial_grid_points: int
    adversarial_training_points: int


def domain_grid(problem, resolution):
    """Regular grid with ``resolution`` nodes per axis, restricted to the domain."""
    lo = -1.0 if problem.domain == "ball" else 0.0
    axis = np.linspace(lo, 1.0, resolution)
    mesh = np.meshgrid(*([axis] * problem.dim), indexing="ij")
    G = np.stack([m.ravel() for m in mesh], axis=1)
    return G[in_domain(problem, G)]


def adversarial_density(problem, estimator, n, epsilon, resolution, seed, include_training=True):
    """Density and mass of the set where the plug-in classifier disagrees with Bayes.

    ``f_hat`` and ``f*`` are evaluated on a regular grid over the domain.
    ``adversarial_mass`` is the fraction of grid nodes where they disagree;
    ``covered_fraction`` is the fraction of grid nodes within ``2 epsilon``
    of some disagreement point.  With ``include_training`` the training
    points are also evaluated as candidate disagreement points: an
    interpolating classifier reproduces noisy labels there, so these points
    belong to the disagreement set even though it is far too thin for a
    grid to resolve.
    """
    if not problem.binary:
        raise ConfigError("adversarial density needs a binary problem")
    if epsilon < 0:
        raise ConfigError("epsilon must be nonnegative")
    data = sample_dataset(problem, n, make_rng(seed))
    est = estimator.make() if isinstance(estimator, EstimatorConfig) else estimator
    est.fit(data.points, data.labels)

    grid = domain_grid(problem, resolution)
    bad_grid = plugin_classify(est.predict(grid)) != plugin_classify(eta_eval(problem, grid))
    candidates = [grid[bad_grid]]
    n_train_bad = 0
    if include_training:
        X = data.points
        bad_train = plugin_classify(est.predict(X)) != plugin_classify(eta_eval(problem, X))
        n_train_bad = int(bad_train.sum())
        candidates.append(X[bad_train])
    A = np.vstack(candidates)
    if A.shape[0] == 0:
        covered = 0.0
    else:
        dist, _ = cKDTree(A).query(grid, k=1)
        covered = float(np.mean(dist <= 2 * epsilon))
    return AdversarialResult(covered, float(bad_grid.mean()), int(bad_grid.sum()), n_train_bad)


def regular_simplex(d):
    """Vertices ``(d+1, d)`` of a regular simplex.

    Built by projecting the standard basis of ``R^(d+1)`` onto its
    centered hyperplane, so all edges have length ``sqrt(2)``.
    """
    E = np.eye(d + 1)
    C = E - E.mean(axis=0)
    _, _, Vt = np.linalg.svd(C)
    return C @ Vt[:d].T


def simplex_noise_demo(d, samples=10**6, seed=0, batch=200_000):
    """Volume fractions predicted 1 by simplicial interpolation and by 1-NN.

    On a regular ``d``-simplex with labels ``(0, ..., 0, 1)``, uniform points
    are drawn and located through barycentric coordinates.  Returns
    ``(simplicial_fraction, nn_fraction)``.
    """
    if d < 1:
        raise ConfigError("d must be at least 1")
    V = regular_simplex(d)
    cell = SimplexCell(tuple(range(d + 1)), V)
    labels = np.zeros(d + 1)
    labels[-1] = 1.0
    rng = make_rng(seed)
    simp = nn = 0
    done = 0
    while done < samples:
        m = min(batch, samples - done)
        X = rng.dirichlet(np.ones(d + 1), size=m) @ V
        eta_hat = cell.barycentric(X) @ labels
        simp += int(np.count_nonzero(plugin_classify(eta_hat)))
        d2 = ((X[:, None, :] - V[None, :, :]) ** 2).sum(-1)
        nn += int(np.count_nonzero(np.argmin(d2, axis=1) == d))
        done += m
    return simp / samples, nn / samples


def _outside_hull(points, queries):
    lo, hi = points.min(axis=0), points.max(axis=0)
    out = np.empty(len(queries), dtype=bool)
    for i, q in enumerate(queries):
        if np.any(q < lo) or np.any(q > hi):
            out[i] = True
        else:
            out[i] = not hull_contains(points, q)
    return out


def hull_miss_mass(problem, n, trials, seed, test_points=100):
    """Monte Carlo estimate of ``E[mu(outside the hull of n samples)]``."""
    if n < 1 or trials < 1 or test_points < 1:
        raise ConfigError("n, trials and test_points must be positive")
    vals = []
    for t in range(trials):
        rng = make_rng(seed, n, t)
        P = sample_points(problem, n, rng)
        Q = sample_points(problem, test_points, rng)
        vals.append(_outside_hull(P, Q).mean())
    vals = np.array(vals)
    se = float(vals.std(ddof=1) / np.sqrt(trials)) if trials > 1 else 0.0
    return Estimate(n, float(vals.mean()), se, trials)
