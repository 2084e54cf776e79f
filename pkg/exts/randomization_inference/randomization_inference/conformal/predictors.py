"""Point predictors used by the conformity scores.

A predictor exposes ``fit(x, y) -> model`` and ``predict(model, x) -> predictions``. Full conformal prediction
refits the predictor on the calibration points plus the candidate point, so ``fit`` must treat its training points
symmetrically (its output may not depend on their order). Bare-value predictors ignore ``x``.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg
from typing import Any, Protocol

from ..errors import StructuralError


class Predictor(Protocol):
    def fit(self, x: np.ndarray | None, y: np.ndarray) -> Any: ...

    def predict(self, model: Any, x: np.ndarray | None) -> np.ndarray: ...


def _num_points(x: np.ndarray | None, fallback: int) -> int:
    return fallback if x is None else np.asarray(x).shape[0]


class ConstantPredictor:
    """Predicts a fixed value ``c`` regardless of the training data."""

    def __init__(self, value: float = 0.0):
        self.value = float(value)

    def fit(self, x: np.ndarray | None, y: np.ndarray) -> float:
        return self.value

    def predict(self, model: float, x: np.ndarray | None) -> np.ndarray:
        return np.full(_num_points(x, 1), model)


class MeanPredictor:
    """Predicts the mean of the training responses."""

    def fit(self, x: np.ndarray | None, y: np.ndarray) -> float:
        y = np.asarray(y, dtype=float)
        if y.shape[0] == 0:
            raise StructuralError("Cannot fit a predictor on zero points.")
        return float(y.mean())

    def predict(self, model: float, x: np.ndarray | None) -> np.ndarray:
        return np.full(_num_points(x, 1), model)


class MedianPredictor(MeanPredictor):
    """Predicts the median of the training responses."""

    def fit(self, x: np.ndarray | None, y: np.ndarray) -> float:
        y = np.asarray(y, dtype=float)
        if y.shape[0] == 0:
            raise StructuralError("Cannot fit a predictor on zero points.")
        return float(np.median(y))


class LeastSquaresPredictor:
    """Ordinary least squares on the covariates, with an intercept by default."""

    def __init__(self, fit_intercept: bool = True):
        self.fit_intercept = fit_intercept

    def _design(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        x = x.reshape(x.shape[0], -1)
        if self.fit_intercept:
            x = np.column_stack([np.ones(x.shape[0]), x])
        return x

    def fit(self, x: np.ndarray | None, y: np.ndarray) -> np.ndarray:
        if x is None:
            raise StructuralError("Least-squares prediction requires covariates.")
        y = np.asarray(y, dtype=float)
        if y.shape[0] == 0:
            raise StructuralError("Cannot fit a predictor on zero points.")
        coef, *_ = scipy.linalg.lstsq(self._design(x), y)
        return coef

    def predict(self, model: np.ndarray, x: np.ndarray | None) -> np.ndarray:
        if x is None:
            raise StructuralError("Least-squares prediction requires covariates.")
        return self._design(x) @ model
