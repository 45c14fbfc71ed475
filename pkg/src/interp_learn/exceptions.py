"""Exception hierarchy shared by every module of the package."""


class InterpLearnError(Exception):
    """Base class for all package errors."""


class NumericalError(InterpLearnError):
    """A computation could not be completed for numerical reasons."""


class ConfigError(InterpLearnError, ValueError):
    """Invalid user configuration or arguments."""


# --- linear programming -------------------------------------------------------

class Infeasible(NumericalError):
    "No point satisfies the constraints."


class Unbounded(NumericalError):
    "The objective is unbounded above on the feasible set."


# --- geometry -----------------------------------------------------------------

class DegenerateSimplex(NumericalError):
    "The lifted vertex matrix of a simplex is (numerically) singular."


class DegenerateConfiguration(NumericalError):
    "No non-degenerate Delaunay cell containing the query could be selected."


class OutsideHull(InterpLearnError):
    "The query lies outside the convex hull of the points."


# --- neighbors / estimators ---------------------------------------------------

class EmptyDataset(ConfigError):
    pass


class KTooLarge(ConfigError):
    pass


class NonPositiveArgument(ConfigError):
    pass


# --- synthetic ----------------------------------------------------------------

class OutsideDomain(ConfigError):
    pass


# --- graph ssl ----------------------------------------------------------------

class SingularSystem(NumericalError):
    "The harmonic system has an unlabeled component with kappa = 0."


class NegativeKappa(ConfigError):
    pass


class NoLabels(ConfigError):
    pass


# --- harness ------------------------------------------------------------------

class NonPositiveValue(ConfigError):
    pass


class SingularKernelMatrix(NumericalError):
    pass


class NonMonotoneLabels(ConfigError):
    pass
