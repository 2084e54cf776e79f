"""Statistics of cluster scores evaluated over batches of sign changes."""

from __future__ import annotations

import numpy as np
from typing import TYPE_CHECKING

from ..errors import SingularityError, StructuralError
from ..sample import Sample
from ..stats.common import studentize

if TYPE_CHECKING:
    from . import art_cfg


def as_score_batch(data: np.ndarray) -> np.ndarray:
    """Reshape a batch of scalar scores (B, q) to (B, q, 1)."""
    data = np.asarray(data, dtype=float)
    return data[..., None] if data.ndim == 2 else data


def t_parts(scores: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Mean and ``q - 1`` standard deviation of scalar scores along the last axis."""
    q = scores.shape[-1]
    mean = scores.mean(axis=-1)
    spread = np.sqrt(((scores - mean[..., None]) ** 2).sum(axis=-1) / (q - 1))
    return mean, spread


def wald_batch(data: np.ndarray, sample: Sample, cfg: art_cfg.WaldCfg, strict: bool) -> np.ndarray:
    """``q * mean(S)' Sigma^-1 mean(S)`` for a batch of sign-changed scores of shape (B, q, d).

    Sigma is the average outer product of the scores around their mean (``center_covariance``) or around zero.
    A singular Sigma yields ``+inf`` for a non-zero mean and ``0`` otherwise.
    """
    scores = as_score_batch(data)
    q, d = scores.shape[1], scores.shape[2]
    mean = scores.mean(axis=1)
    deviations = scores - mean[:, None, :] if cfg.center_covariance else scores
    sigma = np.einsum("bqi,bqj->bij", deviations, deviations) / q
    with np.errstate(divide="ignore", invalid="ignore"):
        condition = np.linalg.cond(sigma)
    singular = ~(condition <= cfg.condition_threshold)
    if strict and singular.any():
        raise SingularityError(float(condition[singular][0]), cfg.condition_threshold, "cluster score covariance")
    safe = np.where(singular[:, None, None], np.eye(d), sigma)
    solved = np.linalg.solve(safe, mean[..., None])[..., 0]
    values = q * (mean * solved).sum(axis=-1)
    nonzero = np.any(mean != 0.0, axis=-1)
    return np.where(singular, np.where(nonzero, np.inf, 0.0), values)


def tstat_batch(data: np.ndarray, sample: Sample, cfg: art_cfg.TStatCfg, strict: bool) -> np.ndarray:
    """``|mean(S)| / sd(S)`` for scalar scores of shape (B, q) or (B, q, 1)."""
    scores = as_score_batch(data)
    if scores.shape[2] != 1:
        raise StructuralError(f"The cluster t-statistic requires scalar scores, received dimension {scores.shape[2]}.")
    mean, spread = t_parts(scores[..., 0])
    return studentize(np.abs(mean), spread, strict, "spread of the cluster scores")
