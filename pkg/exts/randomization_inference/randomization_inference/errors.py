"""Exception hierarchy shared by all sub-packages.

Validation problems derive from :class:`ValueError` so that callers catching the builtin keep working. The
command-line front end maps :class:`StructuralError` and :class:`ParameterError` to exit code 2 and every other
failure to exit code 1.
"""

from __future__ import annotations

__all__ = [
    "RandomizationInferenceError",
    "StructuralError",
    "RankDeficiencyError",
    "ParameterError",
    "EnumerationCapError",
    "NullMismatchError",
    "DegenerateScaleError",
    "SingularityError",
    "UndefinedStatisticError",
    "PredictorFailure",
]


class RandomizationInferenceError(ValueError):
    """Base class of all errors raised by the package."""


class StructuralError(RandomizationInferenceError):
    """Malformed input: label layouts, length mismatches, empty samples or splits."""


class RankDeficiencyError(StructuralError):
    """A per-cluster design matrix does not have full column rank."""

    def __init__(self, cluster, rank: int, num_columns: int):
        self.cluster = cluster
        super().__init__(
            f"Design of cluster '{cluster}' has rank {rank} < {num_columns} columns. Pool one or more clusters"
            " together (coarsen the clustering) so that every cluster identifies the coefficients."
        )


class ParameterError(RandomizationInferenceError):
    """A parameter lies outside its admissible range."""


class EnumerationCapError(ParameterError):
    """The group is too large for exact enumeration."""

    def __init__(self, num_elements: int, cap: int):
        self.num_elements = num_elements
        self.cap = cap
        super().__init__(
            f"The group has {num_elements} elements which exceeds the enumeration cap of {cap}."
            " Use Monte Carlo mode (mode='mc') or raise the cap."
        )


class NullMismatchError(ParameterError):
    """A level study was requested on a scenario whose null hypothesis does not hold."""


class DegenerateScaleError(RandomizationInferenceError):
    """A studentizing scale estimate is zero."""


class SingularityError(DegenerateScaleError):
    """A covariance estimate is singular or numerically ill-conditioned."""

    def __init__(self, condition_number: float, threshold: float, what: str = "covariance estimate"):
        self.condition_number = condition_number
        self.threshold = threshold
        super().__init__(
            f"The {what} is singular: condition number {condition_number:.3e} exceeds the threshold {threshold:.1e}."
        )


class UndefinedStatisticError(RandomizationInferenceError):
    """The statistic is undefined on the (transformed) sample."""


class PredictorFailure(RuntimeError):
    """A conformal predictor raised while refitting at a response grid point."""

    def __init__(self, grid_value: float, cause: BaseException | str):
        self.grid_value = grid_value
        self.cause = cause if isinstance(cause, str) else f"{type(cause).__name__}: {cause}"
        super().__init__(f"Predictor failed at response grid point y={grid_value!r}: {self.cause}")

    def __reduce__(self):
        # worker processes send the error back pickled
        return type(self), (self.grid_value, self.cause)
