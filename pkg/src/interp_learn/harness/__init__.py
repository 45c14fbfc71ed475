"""Monte Carlo experiments, rate fitting and one-dimensional demonstrations."""

from .experiments import (
    AdversarialResult,
    adversarial_density,
    domain_grid,
    hull_miss_mass,
    regular_simplex,
    simplex_noise_demo,
)
from .montecarlo import (
    Estimate,
    ExperimentResult,
    ExperimentSpec,
    mc_disagreement,
    mc_mse,
    run_trials,
)
from .onedim import laplace1d_interpolant, pert1d_expectation, pert1d_forest
from .rates import RateFit, fit_rate

__all__ = [
    "AdversarialResult",
    "Estimate",
    "ExperimentResult",
    "ExperimentSpec",
    "RateFit",
    "adversarial_density",
    "domain_grid",
    "fit_rate",
    "hull_miss_mass",
    "laplace1d_interpolant",
    "mc_disagreement",
    "mc_mse",
    "pert1d_expectation",
    "pert1d_forest",
    "regular_simplex",
    "run_trials",
    "simplex_noise_demo",
]
