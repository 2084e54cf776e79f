"""Autocorrelation and trend statistics for a single series under the permutation group."""

from __future__ import annotations

import numpy as np
import scipy.stats
from collections.abc import Sequence
from typing import TYPE_CHECKING

from ..errors import ParameterError, StructuralError
from .common import bartlett_lrv, default_truncation_lag, finish, studentize

if TYPE_CHECKING:
    from ..sample import Sample
    from . import statistics_cfg

PAIR_BUDGET = 2_000_000
"""Largest number of pairwise differences held in memory at once by the trend statistic."""


def _series(x: Sequence[float] | np.ndarray, min_size: int) -> np.ndarray:
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape[0] < min_size:
        raise StructuralError(f"The series must contain at least {min_size} observations, received {x.shape[0]}.")
    return x


"""
Autocorrelation.
"""


def _autocorr_parts(x: np.ndarray, lag: int, strict: bool) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    n = x.shape[-1]
    yc = x - x.mean(axis=-1, keepdims=True)
    var = (yc * yc).mean(axis=-1)
    cross = (yc[..., : n - lag] * yc[..., lag:]).sum(axis=-1) / n
    rho = studentize(cross, var, strict, "series variance")
    return rho, yc, var


def _autocorr_studentizer(rho: np.ndarray, yc: np.ndarray, var: np.ndarray, lag: int, truncation_lag: int):
    n = yc.shape[-1]
    # influence terms aligned over n - lag indices: b - rho * a with a = Y_i^2 and b = Y_i Y_{i+lag}
    squares = yc[..., : n - lag] ** 2
    products = yc[..., : n - lag] * yc[..., lag:]
    influence = products - rho[..., None] * squares
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.sqrt(bartlett_lrv(influence, truncation_lag)) / var


def autocorr(
    x: Sequence[float] | np.ndarray,
    lag: int = 1,
    studentize_stat: bool = False,
    truncation_lag: int | None = None,
) -> float:
    """Scaled lag-``k`` autocorrelation ``sqrt(n) * rho(k)``, optionally studentized.

    ``rho(k) = (1/n) sum_i Y_i Y_{i+k} / sigma^2`` with ``Y = X - mean(X)``. The studentized variant divides by
    the plug-in standard deviation ``gamma`` obtained from a Bartlett long-run variance of the influence terms
    ``Y_i Y_{i+k} - rho(k) Y_i^2``, scaled by ``1 / sigma^2``. For i.i.d. data ``gamma`` tends to one.

    Args:
        x: The series.
        lag: The lag k >= 1.
        studentize_stat: Whether to studentize. Defaults to False.
        truncation_lag: Bartlett truncation lag. Defaults to None, in which case ``floor(n^(1/3))`` is used.

    Raises:
        ParameterError: When ``lag < 1`` or ``lag >= n``.
        DegenerateScaleError: When the series is constant or the studentizer vanishes.
    """
    x = _series(x, 2)
    _check_lag(lag, x.shape[0])
    rho, yc, var = _autocorr_parts(x[None], lag, strict=True)
    stat = np.sqrt(x.shape[0]) * rho
    if studentize_stat:
        lag_l = default_truncation_lag(x.shape[0]) if truncation_lag is None else truncation_lag
        gamma = _autocorr_studentizer(rho, yc, var, lag, lag_l)
        stat = studentize(stat, gamma, True, "autocorrelation studentizer")
    return float(stat[0])


def autocorr_studentizer(x: Sequence[float] | np.ndarray, lag: int = 1, truncation_lag: int | None = None) -> float:
    """Plug-in asymptotic standard deviation of ``sqrt(n) * rho(k)``."""
    x = _series(x, 2)
    _check_lag(lag, x.shape[0])
    rho, yc, var = _autocorr_parts(x[None], lag, strict=True)
    lag_l = default_truncation_lag(x.shape[0]) if truncation_lag is None else truncation_lag
    return float(_autocorr_studentizer(rho, yc, var, lag, lag_l)[0])


def _check_lag(lag: int, n: int):
    if lag < 1 or lag >= n:
        raise ParameterError(f"The lag must satisfy 1 <= k < n = {n}, received {lag}.")


def autocorr_batch(data: np.ndarray, sample: Sample, cfg: statistics_cfg.AutocorrCfg, strict: bool) -> np.ndarray:
    n = data.shape[-1]
    _check_lag(cfg.lag, n)
    rho, yc, var = _autocorr_parts(np.asarray(data, dtype=float), cfg.lag, strict)
    stat = np.sqrt(n) * rho
    if cfg.studentize:
        lag_l = default_truncation_lag(n) if cfg.truncation_lag is None else cfg.truncation_lag
        gamma = _autocorr_studentizer(rho, yc, var, cfg.lag, lag_l)
        stat = studentize(stat, gamma, strict, "autocorrelation studentizer")
    return finish(stat, cfg.absolute)


"""
Trend.
"""


def _kendall_sum(data: np.ndarray) -> np.ndarray:
    n = data.shape[-1]
    upper_i, upper_j = np.triu_indices(n, k=1)
    rows = max(1, PAIR_BUDGET // max(1, len(upper_i)))
    sums = np.empty(data.shape[0], dtype=float)
    for start in range(0, data.shape[0], rows):
        block = data[start : start + rows]
        sums[start : start + rows] = np.sign(block[:, upper_j] - block[:, upper_i]).sum(axis=-1)
    return sums


def _mann_kendall_parts(data: np.ndarray) -> np.ndarray:
    n = data.shape[-1]
    return 3.0 / n**1.5 * _kendall_sum(data)


def _mann_kendall_studentizer(data: np.ndarray, truncation_lag: int) -> np.ndarray:
    n = data.shape[-1]
    ranks = scipy.stats.rankdata(data, axis=-1)
    # rank projection 2 F(X_i) - 1, centered on the empirical cdf
    projection = 2.0 * (ranks - 0.5) / n - 1.0
    return np.sqrt(3.0 * bartlett_lrv(projection, truncation_lag))


def mann_kendall(x: Sequence[float] | np.ndarray) -> float:
    """Mann-Kendall trend statistic ``U = (3 / n^(3/2)) sum_{i<j} sign(x_j - x_i)``.

    Raises:
        StructuralError: When the series has fewer than two observations.
    """
    x = _series(x, 2)
    return float(_mann_kendall_parts(x[None])[0])


def studentized_mann_kendall(x: Sequence[float] | np.ndarray, truncation_lag: int | None = None) -> float:
    """Plug-in studentized Mann-Kendall statistic ``U / sqrt(3 * LRV(h))``.

    ``h_i = 2 F(X_i) - 1`` is the rank projection of the series and ``LRV`` a Bartlett long-run variance. For
    i.i.d. continuous data ``3 * LRV(h)`` tends to one, so both statistics share the same limit there.

    Raises:
        StructuralError: When the series has fewer than two observations.
        DegenerateScaleError: When the series is constant.
    """
    x = _series(x, 2)
    lag_l = default_truncation_lag(x.shape[0]) if truncation_lag is None else truncation_lag
    u = _mann_kendall_parts(x[None])
    return float(studentize(u, _mann_kendall_studentizer(x[None], lag_l), True, "trend studentizer")[0])


def mann_kendall_batch(
    data: np.ndarray, sample: Sample, cfg: statistics_cfg.MannKendallCfg, strict: bool
) -> np.ndarray:
    data = np.asarray(data, dtype=float)
    u = _mann_kendall_parts(data)
    if cfg.studentize:
        n = data.shape[-1]
        lag_l = default_truncation_lag(n) if cfg.truncation_lag is None else cfg.truncation_lag
        u = studentize(u, _mann_kendall_studentizer(data, lag_l), strict, "trend studentizer")
    return finish(u, cfg.absolute)
