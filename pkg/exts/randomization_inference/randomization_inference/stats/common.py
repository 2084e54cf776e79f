"""Numeric helpers shared by the statistics.

Every statistic is vectorized over a leading batch axis. Public scalar functions evaluate the statistic with
``strict=True``, which raises on zero studentizing scales and undefined values. Inside a randomization
distribution the same code runs with ``strict=False`` and follows the extended convention: a zero scale yields
``+inf`` (or ``-inf``) for a non-zero numerator and ``0`` when the numerator is zero as well, while undefined
values become NaN and are handled by the statistic's undefined policy.
"""

from __future__ import annotations

import math
import numpy as np

from ..errors import DegenerateScaleError, ParameterError, StructuralError, UndefinedStatisticError


def studentize(numerator: np.ndarray, scale: np.ndarray, strict: bool, what: str) -> np.ndarray:
    """Divide ``numerator`` by the non-negative ``scale``.

    Args:
        numerator: Numerators, batched.
        scale: Studentizing scales (standard-deviation units), broadcastable to ``numerator``.
        strict: Whether a zero scale raises instead of following the extended convention.
        what: Name of the scale used in error messages.

    Raises:
        DegenerateScaleError: When ``strict`` and some scale is zero.
    """
    numerator = np.asarray(numerator, dtype=float)
    scale = np.broadcast_to(np.asarray(scale, dtype=float), numerator.shape)
    zero = ~(scale > 0.0) & ~np.isnan(scale)
    if strict and np.any(zero):
        raise DegenerateScaleError(f"The {what} is zero; the studentized statistic is undefined.")
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = numerator / scale
    extended = np.where(numerator == 0.0, 0.0, np.copysign(np.inf, numerator))
    return np.where(zero, extended, ratio)


def check_defined(values: np.ndarray, strict: bool, what: str) -> np.ndarray:
    """Raise on NaN entries when ``strict``; otherwise pass the values through."""
    if strict and np.any(np.isnan(values)):
        raise UndefinedStatisticError(f"The {what} is undefined on this sample.")
    return values


def finish(values: np.ndarray, absolute: bool) -> np.ndarray:
    """Take absolute values for two-sided statistics."""
    return np.abs(values) if absolute else values


def masked_moments(values: np.ndarray, mask: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Count, mean and 1/n variance of ``values`` over ``mask`` along the last axis.

    ``values`` and ``mask`` are broadcast against each other, so either can carry the batch axis.
    """
    weights = np.asarray(mask, dtype=float)
    values = np.asarray(values, dtype=float)
    count = weights.sum(axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        mean = (values * weights).sum(axis=-1) / count
        var = (((values - mean[..., None]) ** 2) * weights).sum(axis=-1) / count
    return count, mean, var


def default_truncation_lag(n: int) -> int:
    """Default Bartlett truncation lag ``floor(n^(1/3))``."""
    return max(0, int(math.floor(n ** (1.0 / 3.0) + 1e-9)))


def bartlett_lrv(u: np.ndarray, truncation_lag: int) -> np.ndarray:
    """Bartlett-weighted long-run variance of ``u`` along the last axis.

    The series is centered first. Autocovariances use the 1/m normalization and the weights
    ``1 - l / (L + 1)``, which keep the estimate non-negative.
    """
    u = np.asarray(u, dtype=float)
    u = u - u.mean(axis=-1, keepdims=True)
    m = u.shape[-1]
    lrv = (u * u).sum(axis=-1) / m
    for lag in range(1, min(truncation_lag, m - 1) + 1):
        weight = 1.0 - lag / (truncation_lag + 1.0)
        lrv = lrv + 2.0 * weight * (u[..., lag:] * u[..., :-lag]).sum(axis=-1) / m
    return np.maximum(lrv, 0.0)


def two_sample_layout(data: np.ndarray, fixed: np.ndarray | None, layout: str) -> tuple[np.ndarray, np.ndarray]:
    """Return the outcome values and the first-sample mask for a batch of transformed samples.

    Args:
        data: Batch of acted-on coordinates with shape (B, N).
        fixed: The fixed coordinates of the sample.
        layout: ``"pooled"`` when ``data`` holds outcomes and ``fixed`` the labels, ``"assignment"`` when
            ``data`` holds treatment indicators and ``fixed`` the outcomes.
    """
    if fixed is None:
        raise StructuralError("Two-sample statistics require labels (or outcomes) in the sample's fixed coordinate.")
    if layout == "pooled":
        return data, np.asarray(fixed) == 1
    if layout == "assignment":
        return np.asarray(fixed, dtype=float), np.asarray(data) == 1
    raise ParameterError(f"Unknown two-sample layout '{layout}'. Expected 'pooled' or 'assignment'.")
