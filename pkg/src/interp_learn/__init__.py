"""Interpolating nonparametric predictors and Monte Carlo checks of their risk."""

from .dataset import LabeledDataset
from .estimators import (
    EstimatorConfig,
    HilbertKernelRegressor,
    KNNRegressor,
    PluginClassifier,
    SimplicialInterpolator,
    WeightFunction,
    WiNNRegressor,
)
from .synthetic import SyntheticProblem, sample_dataset

__version__ = "0.1.0"

__all__ = [
    "EstimatorConfig",
    "HilbertKernelRegressor",
    "KNNRegressor",
    "LabeledDataset",
    "PluginClassifier",
    "SimplicialInterpolator",
    "SyntheticProblem",
    "WeightFunction",
    "WiNNRegressor",
    "sample_dataset",
]
