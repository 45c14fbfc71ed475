"""Seeded Monte Carlo estimates of regression and classification error.

Trial ``t`` at sample size ``n`` draws everything (training set, test points,
test labels) from the stream ``(master_seed, n, t)``.  Trials may run on a
thread pool, but results are reduced in trial order, so output does not
depend on the number of workers.
"""

from __future__ import annotations

import csv
import io
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, clone

from ..estimators import EstimatorConfig, plugin_classify
from ..exceptions import ConfigError, NumericalError
from ..synthetic import SyntheticProblem, eta_eval, make_rng, sample_dataset, sample_labels, sample_points

log = logging.getLogger(__name__)

__all__ = [
    "ExperimentSpec",
    "Estimate",
    "ExperimentResult",
    "mc_mse",
    "mc_disagreement",
    "run_trials",
]


@dataclass(frozen=True)
class ExperimentSpec:
    """What to simulate: problem, predictor, sample sizes and trial counts.

    ``estimator`` is an :class:`EstimatorConfig` or any unfitted scikit-learn
    style regressor (cloned per trial).
    """

    problem: SyntheticProblem
    estimator: object
    n_list: tuple
    trials: int = 20
    test_points: int = 200
    master_seed: int = 0

    def __post_init__(self):
        n_list = tuple(int(n) for n in np.atleast_1d(self.n_list))
        object.__setattr__(self, "n_list", n_list)
        if not n_list or min(n_list) < 1:
            raise ConfigError("n_list must hold positive sample sizes")
        if any(b <= a for a, b in zip(n_list, n_list[1:])):
            raise ConfigError("n_list must be strictly increasing")
        if self.trials < 1 or self.test_points < 1:
            raise ConfigError("trials and test_points must be at least 1")
        if self.master_seed < 0:
            raise ConfigError("master_seed must be nonnegative")

    def make_estimator(self):
        est = self.estimator
        if isinstance(est, EstimatorConfig):
            return est.make()
        if isinstance(est, BaseEstimator):
            return clone(est)
        if hasattr(est, "fit") and hasattr(est, "predict"):
            return est
        raise ConfigError(f"cannot build an estimator from {est!r}")


@dataclass(frozen=True)
class Estimate:
    n: int
    mean: float
    stderr: float
    trials: int


@dataclass
class ExperimentResult:
    """Per-``n`` mean and standard error of one or more trial statistics.

    ``series`` maps statistic names to estimates; ``statistic`` names the
    primary one.  Standard errors use the spread across trials.
    """

    statistic: str
    series: dict
    elapsed: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    @property
    def estimates(self):
        return self.series[self.statistic]

    def means(self, statistic=None):
        return np.array([e.mean for e in self.series[statistic or self.statistic]])

    def to_csv(self, statistic=None):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "mean", "stderr", "trials"])
        for e in self.series[statistic or self.statistic]:
            w.writerow([e.n, repr(e.mean), repr(e.stderr), e.trials])
        return buf.getvalue()


def _aggregate(n, values):
    vals = np.asarray(values, dtype=float)
    t = vals.size
    if t == 0:
        return Estimate(n, float("nan"), float("nan"), 0)
    se = float(vals.std(ddof=1) / np.sqrt(t)) if t > 1 else 0.0
    return Estimate(n, float(vals.mean()), se, t)


def run_trials(spec, trial_fn, names, threads=1):
    """Run ``trial_fn(spec, n, rng) -> dict`` for every ``(n, trial)`` and aggregate.

    Statistics listed in ``names`` are averaged in trial order.  Trials that
    raise a :class:`NumericalError` are recorded in ``failures`` and left out.
    """
    series = {name: [] for name in names}
    elapsed = {}
    failures = []

    def one(n, t):
        rng = make_rng(spec.master_seed, n, t)
        try:
            return trial_fn(spec, n, rng)
        except NumericalError as exc:
            return exc

    for n in spec.n_list:
        start = time.perf_counter()
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                outs = list(pool.map(lambda t: one(n, t), range(spec.trials)))
        else:
            outs = [one(n, t) for t in range(spec.trials)]
        elapsed[n] = time.perf_counter() - start
        ok = []
        for t, out in enumerate(outs):
            if isinstance(out, Exception):
                failures.append((n, t, f"{type(out).__name__}: {out}"))
                log.warning("trial n=%d t=%d failed: %s", n, t, out)
            else:
                ok.append(out)
        for name in names:
            series[name].append(_aggregate(n, [o[name] for o in ok]))
    return ExperimentResult(names[0], series, elapsed, failures)


def _fit_and_predict(spec, n, rng):
    data = sample_dataset(spec.problem, n, rng)
    X_test = sample_points(spec.problem, spec.test_points, rng)
    est = spec.make_estimator().fit(data.points, data.labels)
    return X_test, np.asarray(est.predict(X_test), dtype=float)


def _mse_trial(spec, n, rng):
    X_test, pred = _fit_and_predict(spec, n, rng)
    eta = eta_eval(spec.problem, X_test)
    return {"mse": float(np.mean((pred - eta) ** 2))}


def _classification_trial(spec, n, rng):
    X_test, pred = _fit_and_predict(spec, n, rng)
    y_test = sample_labels(spec.problem, X_test, rng)
    f_hat = plugin_classify(pred)
    f_star = plugin_classify(eta_eval(spec.problem, X_test))
    return {
        "disagreement": float(np.mean(f_hat != f_star)),
        "risk": float(np.mean(f_hat != y_test)),
    }


def mc_mse(spec, threads=1):
    """Monte Carlo estimate of ``E[(eta_hat(X) - eta(X))^2]`` for each ``n``."""
    return run_trials(spec, _mse_trial, ["mse"], threads)


def mc_disagreement(spec, threads=1):
    """Estimate ``P(f_hat != f*)`` (primary) and the risk ``P(f_hat != Y)``."""
    if not spec.problem.binary:
        raise ConfigError("classification experiments need a binary problem")
    return run_trials(spec, _classification_trial, ["disagreement", "risk"], threads)
