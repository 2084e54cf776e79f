"""Configuration of conformal prediction."""

from __future__ import annotations

import dataclasses
import numpy as np
from dataclasses import dataclass
from typing import Literal

from .predictors import LeastSquaresPredictor, MeanPredictor, MedianPredictor, Predictor

ScoreKind = Literal["abs_residual", "raw_value", "abs_deviation_from_median", "abs_deviation_from_mean"]


@dataclass(kw_only=True)
class ConformalCfg:
    """Configuration for full and split conformal prediction."""

    alpha: float = 0.1
    """Miscoverage level in (0, 1). Defaults to 0.1."""
    score: ScoreKind = "abs_residual"
    """Conformity score. Defaults to "abs_residual".

    "abs_residual": ``|Y - f(X)|`` for the refitted predictor.
    "raw_value": the response itself, which yields a one-sided upper bound.
    "abs_deviation_from_median" and "abs_deviation_from_mean": ``|Y - center|`` of the responses.
    """
    predictor: Predictor | None = None
    """Predictor of the "abs_residual" score. Defaults to None, in which case least squares is used."""
    grid: np.ndarray | None = None
    """Response grid of full conformal prediction. Defaults to None, in which case the default grid is used."""
    num_grid_points: int = 513
    """Number of points of the default grid. Defaults to 513."""
    grid_widening: float = 0.5
    """The default grid spans the observed responses widened by this fraction of their range on each side."""
    tie_rtol: float = 1e-12
    """Relative tolerance of the inclusion comparison ``t_new <= T(k)``. Defaults to 1e-12."""
    num_workers: int = 1
    """Number of worker processes over the grid. Defaults to 1 (sequential)."""
    chunk_size: int = 64
    """Grid points per worker call. Defaults to 64."""

    def resolve_predictor(self) -> Predictor | None:
        """Predictor implied by the score kind (None for raw values)."""
        if self.score == "raw_value":
            return None
        if self.score == "abs_deviation_from_median":
            return MedianPredictor()
        if self.score == "abs_deviation_from_mean":
            return MeanPredictor()
        return LeastSquaresPredictor() if self.predictor is None else self.predictor

    def to_dict(self) -> dict:
        payload = {f.name: getattr(self, f.name) for f in dataclasses.fields(self)}
        payload["predictor"] = type(self.resolve_predictor()).__name__
        return payload
