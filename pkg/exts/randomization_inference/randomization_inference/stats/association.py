"""Correlation statistics for testing independence against uncorrelatedness."""

from __future__ import annotations

import numpy as np
from collections.abc import Sequence
from typing import TYPE_CHECKING

from ..errors import DegenerateScaleError, StructuralError
from ..sample import Sample
from .common import finish, studentize

if TYPE_CHECKING:
    from . import statistics_cfg


def _correlation_parts(x: np.ndarray, y: np.ndarray, strict: bool) -> tuple[np.ndarray, np.ndarray]:
    """Return ``sqrt(n) * rho`` and the studentizer ``V`` for a batch of ``y`` rows paired with a fixed ``x``."""
    n = y.shape[-1]
    xc = x - x.mean(axis=-1, keepdims=True)
    yc = y - y.mean(axis=-1, keepdims=True)
    # central moments mu_{r,s} = mean(xc^r yc^s)
    mu_11 = (xc * yc).mean(axis=-1)
    mu_20 = np.broadcast_to((xc * xc).mean(axis=-1), mu_11.shape)
    mu_02 = (yc * yc).mean(axis=-1)
    mu_22 = (xc * xc * yc * yc).mean(axis=-1)
    if strict and (np.any(mu_20 <= 0.0) or np.any(mu_02 <= 0.0)):
        raise DegenerateScaleError("A marginal variance is zero; the correlation is undefined.")
    marginal = mu_20 * mu_02
    rho = studentize(mu_11, np.sqrt(marginal), False, "marginal scale")
    with np.errstate(divide="ignore", invalid="ignore"):
        v = np.sqrt(mu_22 / marginal)
    v = np.where(marginal > 0.0, v, 0.0)
    return np.sqrt(n) * rho, v


def _paired(x: Sequence[float] | np.ndarray, y: Sequence[float] | np.ndarray) -> Sample:
    sample = Sample.bivariate(x, y)
    if sample.n < 3:
        raise StructuralError(f"At least 3 pairs are required, received {sample.n}.")
    return sample


def correlation(x: Sequence[float] | np.ndarray, y: Sequence[float] | np.ndarray) -> float:
    """Scaled sample correlation ``sqrt(n) * rho``.

    Raises:
        StructuralError: When fewer than three pairs are given.
        DegenerateScaleError: When either coordinate is constant.
    """
    sample = _paired(x, y)
    root_n_rho, _ = _correlation_parts(sample.fixed, sample.data[None], strict=True)
    return float(root_n_rho[0])


def studentized_correlation(x: Sequence[float] | np.ndarray, y: Sequence[float] | np.ndarray) -> float:
    """Studentized correlation ``sqrt(n) * rho / V`` with ``V = sqrt(mu_22 / (mu_20 * mu_02))``.

    Raises:
        StructuralError: When fewer than three pairs are given.
        DegenerateScaleError: When either coordinate is constant, or ``mu_22`` vanishes with a non-zero
            correlation.
    """
    sample = _paired(x, y)
    root_n_rho, v = _correlation_parts(sample.fixed, sample.data[None], strict=True)
    return float(studentize(root_n_rho, v, bool(root_n_rho[0] != 0.0), "fourth-moment scale V")[0])


def correlation_batch(
    data: np.ndarray, sample: Sample, cfg: statistics_cfg.CorrelationCfg, strict: bool
) -> np.ndarray:
    if sample.fixed is None:
        raise StructuralError("Correlation statistics require the first coordinate in the fixed slot.")
    root_n_rho, v = _correlation_parts(np.asarray(sample.fixed, dtype=float), np.asarray(data, dtype=float), strict)
    if cfg.studentize:
        strict_scale = strict and bool(np.any(root_n_rho != 0.0))
        root_n_rho = studentize(root_n_rho, v, strict_scale, "fourth-moment scale V")
    return finish(root_n_rho, cfg.absolute)
