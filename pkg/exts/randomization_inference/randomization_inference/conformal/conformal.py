"""Prediction sets for exchangeable data by inverting permutation tests.

With ``k = ceil((n + 1)(1 - alpha))``, a candidate value is kept when its conformity score is at most the k-th
smallest of the n calibration scores. When ``k = n + 1`` no finite bound exists and the set is unbounded.
"""

from __future__ import annotations

import dataclasses
import functools
import logging
import math
import numpy as np
from dataclasses import dataclass, field

from ..engine.randomization_test import check_alpha
from ..errors import ParameterError, PredictorFailure, StructuralError
from ..utils.parallel import chunked_map
from .conformal_cfg import ConformalCfg
from .predictors import Predictor

logger = logging.getLogger(__name__)

RANK_EPS = 1e-9
"""Slack subtracted before taking the ceiling so that ``20 * 0.95`` yields 19."""


@dataclass
class PredictionInterval:
    """A prediction interval ``[lower, upper]`` (either end may be infinite)."""

    lower: float
    upper: float
    level: float
    """Nominal coverage ``1 - alpha``."""
    k: int
    """Index of the order statistic the bound comes from."""
    num_calibration: int
    """Number of calibration values."""
    center: float | None = None
    """Point prediction at the query (split conformal)."""
    notes: list[str] = field(default_factory=list)

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def contains(self, y: float) -> bool:
        return self.lower <= y <= self.upper

    def to_dict(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "level": self.level,
            "k": self.k,
            "num_calibration": self.num_calibration,
            "center": self.center,
            "notes": list(self.notes),
        }


@dataclass
class PredictionSet:
    """Union of the maximal runs of included grid points."""

    intervals: list[tuple[float, float]]
    """Disjoint ``(lower, upper)`` runs in increasing order."""
    level: float
    k: int
    num_calibration: int
    grid_spacing: float
    """Distance between neighbouring grid points, the discretization error of every endpoint."""
    grid_range: tuple[float, float]
    num_grid_points: int
    notes: list[str] = field(default_factory=list)

    @property
    def is_empty(self) -> bool:
        return len(self.intervals) == 0

    @property
    def lower(self) -> float:
        return self.intervals[0][0] if self.intervals else float("nan")

    @property
    def upper(self) -> float:
        return self.intervals[-1][1] if self.intervals else float("nan")

    def contains(self, y: float) -> bool:
        """Membership up to the grid resolution."""
        return any(lo - 0.5 * self.grid_spacing <= y <= hi + 0.5 * self.grid_spacing for lo, hi in self.intervals)

    def to_dict(self) -> dict:
        return {
            "intervals": [list(run) for run in self.intervals],
            "level": self.level,
            "k": self.k,
            "num_calibration": self.num_calibration,
            "grid_spacing": self.grid_spacing,
            "grid_range": list(self.grid_range),
            "num_grid_points": self.num_grid_points,
            "notes": list(self.notes),
        }


def conformal_rank(n: int, alpha: float) -> int:
    """Return ``k = ceil((n + 1)(1 - alpha))``."""
    check_alpha(alpha)
    return int(math.ceil((n + 1) * (1.0 - alpha) - RANK_EPS))


def _order_statistic(values: np.ndarray, k: int) -> float:
    """k-th smallest value, or ``+inf`` when ``k`` exceeds the number of values."""
    if k > values.shape[0]:
        return float("inf")
    return float(np.sort(values)[k - 1])


_UNBOUNDED_NOTE = "k = n + 1 exceeds the number of calibration values; no finite bound exists at this level."


def upper_bound_exchangeable(x: np.ndarray, alpha: float) -> PredictionInterval:
    """One-sided bound for the next of ``n + 1`` exchangeable values: the k-th smallest of ``x``.

    Raises:
        StructuralError: When ``x`` is empty.
        ParameterError: When alpha is outside (0, 1).
    """
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape[0] == 0:
        raise StructuralError("At least one exchangeable value is required.")
    k = conformal_rank(x.shape[0], alpha)
    upper = _order_statistic(x, k)
    notes = [_UNBOUNDED_NOTE] if math.isinf(upper) else []
    return PredictionInterval(
        lower=-math.inf, upper=upper, level=1.0 - alpha, k=k, num_calibration=x.shape[0], notes=notes
    )


"""
Full conformal prediction.
"""


def default_grid(y: np.ndarray, num_points: int, widening: float) -> np.ndarray:
    """Equispaced grid over the observed range widened by ``widening`` times the range on each side."""
    lo, hi = float(np.min(y)), float(np.max(y))
    span = hi - lo
    if span == 0.0:
        span = max(abs(lo), 1.0)
    return np.linspace(lo - widening * span, hi + widening * span, num_points)


def conformity_scores(
    score: str, predictor: Predictor | None, x: np.ndarray | None, y: np.ndarray
) -> np.ndarray:
    """Scores of all points after fitting the predictor on all of them."""
    if score == "raw_value":
        return np.asarray(y, dtype=float)
    model = predictor.fit(x, y)
    predictions = np.asarray(predictor.predict(model, x), dtype=float).reshape(-1)
    return np.abs(y - predictions)


def _included_chunk(
    grid: np.ndarray,
    y: np.ndarray,
    x: np.ndarray | None,
    x_new: np.ndarray | None,
    k: int,
    score: str,
    predictor: Predictor | None,
    tie_rtol: float,
) -> np.ndarray:
    n = y.shape[0]
    x_aug = None if x is None else np.concatenate([x, x_new], axis=0)
    included = np.empty(grid.shape[0], dtype=float)
    y_aug = np.append(y, 0.0)
    for i, candidate in enumerate(grid):
        y_aug[n] = candidate
        try:
            scores = conformity_scores(score, predictor, x_aug, y_aug)
        except Exception as e:
            raise PredictorFailure(float(candidate), e) from e
        critical = _order_statistic(scores[:n], k)
        included[i] = scores[n] <= critical + tie_rtol * abs(critical)
    return included


def _runs(grid: np.ndarray, mask: np.ndarray) -> list[tuple[float, float]]:
    runs = []
    start = None
    for i, keep in enumerate(mask):
        if keep and start is None:
            start = i
        if not keep and start is not None:
            runs.append((float(grid[start]), float(grid[i - 1])))
            start = None
    if start is not None:
        runs.append((float(grid[start]), float(grid[-1])))
    return runs


def full_conformal(
    y: np.ndarray,
    x: np.ndarray | None = None,
    x_new: np.ndarray | float | None = None,
    cfg: ConformalCfg | None = None,
) -> PredictionSet:
    """Full conformal prediction set for the response at ``x_new``.

    Every grid value ``y`` is appended to the calibration responses, the predictor is refitted on the ``n + 1``
    points and ``y`` is kept when its score is at most the k-th smallest calibration score.

    Args:
        y: Calibration responses of shape (n,).
        x: Calibration covariates of shape (n,) or (n, p). Defaults to None (bare values).
        x_new: Query covariates. Required when ``x`` is given.
        cfg: Configuration. Defaults to None, in which case the defaults are used.

    Raises:
        StructuralError: When there are no calibration points or the covariates are inconsistent.
        ParameterError: When the grid is empty or alpha is outside (0, 1).
        PredictorFailure: When the predictor raises at some grid value.
    """
    cfg = ConformalCfg() if cfg is None else cfg
    y = np.asarray(y, dtype=float).reshape(-1)
    n = y.shape[0]
    if n == 0:
        raise StructuralError("Full conformal prediction requires at least one calibration point.")
    if x is not None:
        x = np.asarray(x, dtype=float)
        x = x.reshape(n, -1)
        if x_new is None:
            raise StructuralError("A query point is required when covariates are given.")
        x_new = np.asarray(x_new, dtype=float).reshape(1, x.shape[1])
    elif cfg.score == "abs_residual" and cfg.predictor is None:
        raise StructuralError("Residual scores without covariates need a bare-value predictor.")
    k = conformal_rank(n, cfg.alpha)
    grid = default_grid(y, cfg.num_grid_points, cfg.grid_widening) if cfg.grid is None else np.asarray(cfg.grid)
    grid = np.sort(grid.astype(float).reshape(-1))
    if grid.shape[0] == 0:
        raise ParameterError("The response grid is empty.")
    spacing = float(np.diff(grid).max()) if grid.shape[0] > 1 else 0.0
    common = dict(
        level=1.0 - cfg.alpha,
        k=k,
        num_calibration=n,
        grid_spacing=spacing,
        grid_range=(float(grid[0]), float(grid[-1])),
        num_grid_points=int(grid.shape[0]),
    )
    if k > n:
        return PredictionSet(intervals=[(-math.inf, math.inf)], notes=[_UNBOUNDED_NOTE], **common)
    evaluate = functools.partial(
        _included_chunk,
        y=y,
        x=x,
        x_new=x_new,
        k=k,
        score=cfg.score,
        predictor=cfg.resolve_predictor(),
        tie_rtol=cfg.tie_rtol,
    )
    mask = chunked_map(evaluate, grid, num_workers=cfg.num_workers, chunk_size=cfg.chunk_size) > 0.5
    notes = []
    if mask[0] or mask[-1]:
        notes.append("The prediction set reaches the boundary of the grid and may extend beyond it.")
    if not mask.any():
        notes.append("No grid value is included; refine the grid.")
    for note in notes:
        logger.warning(note)
    logger.debug("full conformal: %d of %d grid points included (spacing %.3g)", mask.sum(), grid.shape[0], spacing)
    return PredictionSet(intervals=_runs(grid, mask), notes=notes, **common)


def interval_exchangeable(
    x: np.ndarray, alpha: float, center: str = "median", cfg: ConformalCfg | None = None
) -> PredictionSet:
    """Two-sided prediction set for the next exchangeable value from ``|X - center|`` scores.

    Args:
        x: Exchangeable values.
        alpha: Miscoverage level.
        center: "median" or "mean". Defaults to "median".
        cfg: Grid configuration. Defaults to None.
    """
    if center not in ("median", "mean"):
        raise ParameterError(f"Unknown center '{center}'. Expected 'median' or 'mean'.")
    cfg = ConformalCfg() if cfg is None else cfg
    score = "abs_deviation_from_median" if center == "median" else "abs_deviation_from_mean"
    cfg = dataclasses.replace(cfg, alpha=alpha, score=score)
    return full_conformal(x, cfg=cfg)


"""
Split conformal prediction.
"""


def split_conformal(
    train_x: np.ndarray | None,
    train_y: np.ndarray,
    calib_x: np.ndarray | None,
    calib_y: np.ndarray,
    x_new: np.ndarray | float | None,
    alpha: float,
    predictor: Predictor,
) -> PredictionInterval:
    """Interval ``f(x_new) -/+ q`` with ``q`` the k-th smallest absolute calibration residual.

    The predictor is fitted on the training split only.

    Raises:
        StructuralError: When the calibration or training split is empty.
    """
    calib_y = np.asarray(calib_y, dtype=float).reshape(-1)
    train_y = np.asarray(train_y, dtype=float).reshape(-1)
    num_calibration = calib_y.shape[0]
    if num_calibration == 0:
        raise StructuralError("Split conformal prediction requires at least one calibration point.")
    if train_y.shape[0] == 0:
        raise StructuralError("Split conformal prediction requires at least one training point.")
    k = conformal_rank(num_calibration, alpha)
    model = predictor.fit(train_x, train_y)
    residuals = np.abs(calib_y - np.asarray(predictor.predict(model, calib_x), dtype=float).reshape(-1))
    quantile = _order_statistic(residuals, k)
    query = None if x_new is None else np.asarray(x_new, dtype=float).reshape(1, -1)
    center = float(np.asarray(predictor.predict(model, query), dtype=float).reshape(-1)[0])
    notes = [_UNBOUNDED_NOTE] if math.isinf(quantile) else []
    return PredictionInterval(
        lower=center - quantile,
        upper=center + quantile,
        level=1.0 - alpha,
        k=k,
        num_calibration=num_calibration,
        center=center,
        notes=notes,
    )
