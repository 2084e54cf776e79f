"""Two-sample, k-sample and multivariate statistics.

Difference statistics take the first sample ``x`` minus the second sample ``y``. Variances use the 1/n
normalization throughout, which makes the k-sample statistic with two groups and the Hotelling statistic in one
dimension coincide with the (root-N scaled) studentized difference in means squared.
"""

from __future__ import annotations

import numpy as np
import scipy.stats
from collections.abc import Sequence
from typing import TYPE_CHECKING, Literal

from ..errors import DegenerateScaleError, SingularityError, StructuralError
from ..sample import Sample
from .common import check_defined, finish, masked_moments, studentize, two_sample_layout

if TYPE_CHECKING:
    from . import statistics_cfg

DEFAULT_CONDITION_THRESHOLD = 1e12
"""Largest accepted condition number of the Hotelling covariance estimate."""


def _check_sizes(x: np.ndarray, y: np.ndarray, min_size: int):
    if x.shape[0] < min_size or y.shape[0] < min_size:
        raise StructuralError(
            f"Each sample must contain at least {min_size} observation(s), received sizes {x.shape[0]} and"
            f" {y.shape[0]}."
        )


"""
Difference in means.
"""


def _mean_diff_parts(
    values: np.ndarray, in_x: np.ndarray, root: str, with_scale: bool
) -> tuple[np.ndarray, np.ndarray | None]:
    m, mean_x, var_x = masked_moments(values, in_x)
    n, mean_y, var_y = masked_moments(values, ~in_x)
    total = m + n
    factor = np.sqrt(m if root == "m" else total)
    numerator = factor * (mean_x - mean_y)
    if not with_scale:
        return numerator, None
    with np.errstate(divide="ignore", invalid="ignore"):
        scale = np.sqrt(total / m * var_x + total / n * var_y)
    return numerator, scale


def mean_diff(x: Sequence[float] | np.ndarray, y: Sequence[float] | np.ndarray, root: Literal["m", "N"] = "m") -> float:
    """Scaled difference in means ``sqrt(m) * (mean(x) - mean(y))``.

    Args:
        x: First sample of size m.
        y: Second sample of size n.
        root: Scale the difference by ``sqrt(m)`` (default) or by ``sqrt(N)`` with ``N = m + n``.

    Raises:
        StructuralError: When a sample is empty.
    """
    sample = Sample.two_sample(x, y)
    numerator, _ = _mean_diff_parts(sample.data, sample.fixed == 1, root, with_scale=False)
    return float(numerator)


def studentized_mean_diff(
    x: Sequence[float] | np.ndarray, y: Sequence[float] | np.ndarray, root: Literal["m", "N"] = "m"
) -> float:
    """Studentized difference in means ``T / sqrt((N/m) var(x) + (N/n) var(y))``.

    ``T`` is :func:`mean_diff` and the variances use the 1/n normalization. With ``root="N"`` the square of
    this statistic equals the two-group k-sample statistic and the one-dimensional Hotelling statistic.

    Raises:
        StructuralError: When a sample has fewer than two observations.
        DegenerateScaleError: When both samples are constant.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    _check_sizes(x, y, 2)
    sample = Sample.two_sample(x, y)
    numerator, scale = _mean_diff_parts(sample.data, sample.fixed == 1, root, with_scale=True)
    return float(studentize(numerator, scale, True, "pooled two-sample scale"))


def mean_diff_batch(
    data: np.ndarray, sample: Sample, cfg: statistics_cfg.MeanDiffCfg, strict: bool
) -> np.ndarray:
    values, in_x = two_sample_layout(data, sample.fixed, cfg.layout)
    numerator, scale = _mean_diff_parts(values, in_x, cfg.root, cfg.studentize)
    stat = studentize(numerator, scale, strict, "pooled two-sample scale") if cfg.studentize else numerator
    return finish(check_defined(stat, strict, "difference in means"), cfg.absolute)


"""
Wilcoxon.
"""


def _wilcoxon_parts(values: np.ndarray, in_x: np.ndarray, with_scale: bool) -> tuple[np.ndarray, np.ndarray | None]:
    values = np.asarray(values, dtype=float)
    in_x = np.broadcast_to(np.asarray(in_x, dtype=bool), np.broadcast_shapes(values.shape, np.shape(in_x)))
    values = np.broadcast_to(values, in_x.shape)
    # midranks in the combined sample
    ranks = scipy.stats.rankdata(values, axis=-1)
    m = in_x.sum(axis=-1).astype(float)
    n = (~in_x).sum(axis=-1).astype(float)
    rank_sum_x = np.where(in_x, ranks, 0.0).sum(axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        # mass of {X_i <= Y_j} with ties counted 1/2
        w = 1.0 - (rank_sum_x - m * (m + 1.0) / 2.0) / (m * n)
    if not with_scale:
        return w, None
    # midranks within each sample: non-members pushed to +inf rank last
    within_x = scipy.stats.rankdata(np.where(in_x, values, np.inf), axis=-1)
    within_y = scipy.stats.rankdata(np.where(in_x, np.inf, values), axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        # empirical cdf of the other sample evaluated at every observation
        cdf_y_at_x = (ranks - within_x) / n[..., None]
        cdf_x_at_y = (ranks - within_y) / m[..., None]
        mean_fx = np.where(in_x, cdf_y_at_x, 0.0).sum(axis=-1) / m
        mean_fy = np.where(in_x, 0.0, cdf_x_at_y).sum(axis=-1) / n
        xi_x = np.where(in_x, (cdf_y_at_x - mean_fx[..., None]) ** 2, 0.0).sum(axis=-1) / (m - 1.0)
        xi_y = np.where(in_x, 0.0, (cdf_x_at_y - mean_fy[..., None]) ** 2).sum(axis=-1) / (n - 1.0)
        total = m + n
        scale = np.sqrt(total / m * xi_x + total / n * xi_y)
    return w, scale


def wilcoxon(x: Sequence[float] | np.ndarray, y: Sequence[float] | np.ndarray) -> float:
    """Two-sample Wilcoxon statistic ``W = (1/mn) sum_ij I(X_i <= Y_j)`` with ties counted 1/2.

    Raises:
        StructuralError: When a sample is empty.
    """
    sample = Sample.two_sample(x, y)
    w, _ = _wilcoxon_parts(sample.data, sample.fixed == 1, with_scale=False)
    return float(w)


def studentized_wilcoxon(x: Sequence[float] | np.ndarray, y: Sequence[float] | np.ndarray) -> float:
    """Studentized Wilcoxon statistic ``(W - 1/2) / sqrt((N/m) xi_x + (N/n) xi_y)``.

    ``xi_x`` is the sample variance (divisor m - 1) of the second sample's empirical cdf evaluated at the first
    sample's observations, computed from midranks, and ``xi_y`` the mirror quantity.

    Raises:
        StructuralError: When a sample has fewer than two observations.
        DegenerateScaleError: When both rank-variance estimates vanish.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    _check_sizes(x, y, 2)
    sample = Sample.two_sample(x, y)
    w, scale = _wilcoxon_parts(sample.data, sample.fixed == 1, with_scale=True)
    return float(studentize(w - 0.5, scale, True, "Wilcoxon rank-variance estimate"))


def wilcoxon_batch(data: np.ndarray, sample: Sample, cfg: statistics_cfg.WilcoxonCfg, strict: bool) -> np.ndarray:
    values, in_x = two_sample_layout(data, sample.fixed, cfg.layout)
    w, scale = _wilcoxon_parts(values, in_x, cfg.studentize)
    if cfg.studentize:
        stat = studentize(w - 0.5, scale, strict, "Wilcoxon rank-variance estimate")
    else:
        stat = w - 0.5 if cfg.absolute else w
    return finish(check_defined(stat, strict, "Wilcoxon statistic"), cfg.absolute)


"""
k samples.
"""


def _k_sample_parts(values: np.ndarray, labels: np.ndarray, num_groups: int, ddof: int) -> tuple:
    one_hot = np.asarray(labels)[None, :] == np.arange(num_groups)[:, None]
    values = np.asarray(values, dtype=float)[..., None, :]
    count, mean, var = masked_moments(values, one_hot)
    if ddof:
        var = var * count / (count - ddof)
    return count, mean, var


def _k_sample_from_parts(count: np.ndarray, mean: np.ndarray, var: np.ndarray, strict: bool) -> np.ndarray:
    zero = ~(var > 0.0)
    if strict and np.any(zero):
        raise DegenerateScaleError("A within-group variance is zero; the k-sample statistic is undefined.")
    with np.errstate(divide="ignore", invalid="ignore"):
        weights = count / var
        center = (weights * mean).sum(axis=-1) / weights.sum(axis=-1)
        stat = (weights * (mean - center[..., None]) ** 2).sum(axis=-1)
    degenerate = zero.any(axis=-1)
    all_equal = np.all(mean == mean[..., :1], axis=-1)
    return np.where(degenerate, np.where(all_equal, 0.0, np.inf), stat)


def k_sample_stat(samples: Sequence[Sequence[float] | np.ndarray], ddof: int = 0) -> float:
    """Generalized Behrens-Fisher statistic ``sum_i (n_i / s_i^2) (mean_i - weighted mean)^2``.

    The weighted mean uses the weights ``n_i / s_i^2``.

    Args:
        samples: The k samples.
        ddof: Delta degrees of freedom of the variance estimators. Defaults to 0 (1/n).

    Raises:
        StructuralError: When fewer than two samples are given or a sample has fewer than two observations.
        DegenerateScaleError: When some sample is constant.
    """
    sample = Sample.k_sample(samples)
    counts = np.bincount(sample.fixed)
    if np.any(counts < 2):
        raise StructuralError(f"Each sample must contain at least 2 observations, received sizes {counts.tolist()}.")
    count, mean, var = _k_sample_parts(sample.data, sample.fixed, len(counts), ddof)
    return float(_k_sample_from_parts(count, mean, var, strict=True))


def k_sample_batch(data: np.ndarray, sample: Sample, cfg: statistics_cfg.KSampleCfg, strict: bool) -> np.ndarray:
    if sample.fixed is None:
        raise StructuralError("The k-sample statistic requires sample labels in the fixed coordinate.")
    num_groups = int(np.max(sample.fixed)) + 1
    count, mean, var = _k_sample_parts(data, sample.fixed, num_groups, cfg.ddof)
    return _k_sample_from_parts(count, mean, var, strict)


"""
Multivariate.
"""


def _hotelling_from_batch(
    data: np.ndarray, in_x: np.ndarray, strict: bool, threshold: float
) -> np.ndarray:
    data = np.asarray(data, dtype=float)
    if data.ndim == 2:
        data = data[..., None]
    x = data[:, in_x, :]
    y = data[:, ~in_x, :]
    m, n = x.shape[1], y.shape[1]
    total = m + n
    p = m / total
    mean_x, mean_y = x.mean(axis=1), y.mean(axis=1)
    cx, cy = x - mean_x[:, None, :], y - mean_y[:, None, :]
    cov_x = np.einsum("bij,bik->bjk", cx, cx) / m
    cov_y = np.einsum("bij,bik->bjk", cy, cy) / n
    sigma = cov_x / p + cov_y / (1.0 - p)
    t = np.sqrt(total) * (mean_x - mean_y)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        cond = np.linalg.cond(sigma)
    singular = ~(cond <= threshold)
    if strict and np.any(singular):
        raise SingularityError(float(np.max(np.where(singular, cond, 0.0))), threshold, "Hotelling covariance estimate")
    safe_sigma = np.where(singular[:, None, None], np.eye(sigma.shape[-1]), sigma)
    solved = np.linalg.solve(safe_sigma, t[..., None])[..., 0]
    stat = np.einsum("bi,bi->b", t, solved)
    extended = np.where(np.all(t == 0.0, axis=-1), 0.0, np.inf)
    return np.where(singular, extended, stat)


def hotelling_studentized(
    x: np.ndarray, y: np.ndarray, condition_threshold: float = DEFAULT_CONDITION_THRESHOLD
) -> float:
    """Modified Hotelling statistic ``S = T' Sigma^-1 T``.

    ``T = sqrt(N) (mean(x) - mean(y))`` and ``Sigma = Sigma_x / p + Sigma_y / (1 - p)`` with ``p = m / N`` and
    1/n covariance estimates.

    Args:
        x: First sample with shape (m, d).
        y: Second sample with shape (n, d).
        condition_threshold: Largest accepted condition number of ``Sigma``. Defaults to 1e12.

    Raises:
        StructuralError: When the dimensions disagree or ``m <= d`` or ``n <= d``.
        SingularityError: When ``Sigma`` is singular or ill-conditioned.
    """
    x = np.atleast_2d(np.asarray(x, dtype=float).T).T
    y = np.atleast_2d(np.asarray(y, dtype=float).T).T
    if x.shape[1] != y.shape[1]:
        raise StructuralError(f"Dimension mismatch: {x.shape[1]} != {y.shape[1]}.")
    d = x.shape[1]
    if x.shape[0] <= d or y.shape[0] <= d:
        raise StructuralError(
            f"Both sample sizes must exceed the dimension {d}, received {x.shape[0]} and {y.shape[0]}."
        )
    sample = Sample.two_sample(x, y)
    return float(_hotelling_from_batch(sample.data[None], sample.fixed == 1, True, condition_threshold)[0])


def hotelling_batch(data: np.ndarray, sample: Sample, cfg: statistics_cfg.HotellingCfg, strict: bool) -> np.ndarray:
    if sample.fixed is None:
        raise StructuralError("The Hotelling statistic requires sample labels in the fixed coordinate.")
    return _hotelling_from_batch(data, np.asarray(sample.fixed) == 1, strict, cfg.condition_threshold)


"""
Classification.
"""


def match_count(guesses: Sequence | np.ndarray, truth: Sequence | np.ndarray) -> int:
    """Number of positions where ``guesses`` agree with ``truth``."""
    guesses, truth = np.asarray(guesses), np.asarray(truth)
    if guesses.shape != truth.shape:
        raise StructuralError(f"Length mismatch: {guesses.shape} != {truth.shape}.")
    return int(np.sum(guesses == truth))


def match_count_batch(data: np.ndarray, sample: Sample, cfg: statistics_cfg.MatchCountCfg, strict: bool) -> np.ndarray:
    if sample.fixed is None:
        raise StructuralError("The match count requires reference labels in the fixed coordinate.")
    return np.sum(data == np.asarray(sample.fixed), axis=-1).astype(float)
