"""Confidence sets by inverting randomization tests over a grid of null values."""

from __future__ import annotations

import logging
import numpy as np
from collections.abc import Callable
from dataclasses import dataclass, field

from ..errors import ParameterError
from .randomization_test import check_alpha

logger = logging.getLogger(__name__)


@dataclass
class GridInterval:
    """The null values a level-alpha test does not reject, summarized by their hull."""

    lower: float
    """Smallest accepted grid value (NaN when nothing is accepted)."""
    upper: float
    """Largest accepted grid value (NaN when nothing is accepted)."""
    level: float
    """Confidence level ``1 - alpha``."""
    grid: np.ndarray
    """The tested null values."""
    p_values: np.ndarray
    """p-value at every grid value."""
    spacing: float
    """Largest gap between neighbouring grid values."""
    warnings: list[str] = field(default_factory=list)

    @property
    def accepted(self) -> np.ndarray:
        return self.grid[self.p_values > 1.0 - self.level]

    def to_dict(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "level": self.level,
            "grid_spacing": self.spacing,
            "num_grid_points": int(self.grid.shape[0]),
            "warnings": list(self.warnings),
        }


def invert_over_grid(p_value: Callable[[float], float], grid: np.ndarray, alpha: float) -> GridInterval:
    """Collect the grid values whose test has ``p_hat > alpha``.

    Raises:
        ParameterError: When the grid is empty or alpha is outside (0, 1).
    """
    check_alpha(alpha)
    grid = np.sort(np.asarray(grid, dtype=float).reshape(-1))
    if grid.shape[0] == 0:
        raise ParameterError("The inversion grid is empty.")
    p_values = np.asarray([p_value(float(theta)) for theta in grid])
    accepted = p_values > alpha
    spacing = float(np.diff(grid).max()) if grid.shape[0] > 1 else 0.0
    warnings = []
    if not accepted.any():
        lower = upper = float("nan")
        warnings.append("Every grid value is rejected; the confidence set is empty on this grid.")
    else:
        lower, upper = float(grid[accepted].min()), float(grid[accepted].max())
        if accepted[0] or accepted[-1]:
            warnings.append("The confidence set reaches the boundary of the grid; widen the grid.")
    for message in warnings:
        logger.warning(message)
    return GridInterval(
        lower=lower, upper=upper, level=1.0 - alpha, grid=grid, p_values=p_values, spacing=spacing, warnings=warnings
    )
