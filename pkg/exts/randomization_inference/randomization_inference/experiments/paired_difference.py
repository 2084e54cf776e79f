"""Difference-in-means statistic of matched-pair experiments and its adjacent-pairs variance estimate.

With pairs ordered along the covariate, ``D_j`` is the treated-minus-control outcome difference of pair ``j``.
The estimate is ``V = tau2 - lambda / 2`` with ``tau2 = (1/k) sum D_j^2`` and
``lambda = (2/k) sum_{j <= k/2} D_{2j-1} D_{2j}``, the latter using neighbouring pairs to estimate the mean square
of the conditional treatment effect.
"""

from __future__ import annotations

import numpy as np
from dataclasses import dataclass
from typing import TYPE_CHECKING

from ..errors import StructuralError
from ..sample import Sample, pair_members
from ..stats.common import finish, studentize

if TYPE_CHECKING:
    from .inference_cfg import PairedDifferenceCfg

VARIANCE_FLOOR = 1e-3
"""Non-positive variance estimates are replaced by ``VARIANCE_FLOOR * tau2``."""


@dataclass(frozen=True)
class PairVariance:
    """Variance report of a matched-pair sample."""

    tau2: float
    """Mean squared pair difference, the randomization variance of the unstudentized statistic."""
    lam: float
    """Adjacent-pairs estimate of the mean squared conditional treatment effect."""
    variance: float
    """``tau2 - lam / 2`` after clipping."""
    clipped: bool
    """Whether the raw estimate was non-positive and got clipped."""

    def to_dict(self) -> dict:
        return {"tau2": self.tau2, "lambda": self.lam, "variance": self.variance, "variance_clipped": self.clipped}


def pair_differences(d: np.ndarray, y: np.ndarray, members: np.ndarray) -> np.ndarray:
    """Treated-minus-control differences of every pair for a batch of assignments of shape (B, n)."""
    d = np.asarray(d, dtype=float)
    y = np.asarray(y, dtype=float)
    first, second = members[:, 0], members[:, 1]
    return (y[first] - y[second]) * (d[..., first] - d[..., second])


def pair_variance_batch(diffs: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Return ``tau2``, ``lambda``, the clipped variance and the clip mask along the last axis."""
    k = diffs.shape[-1]
    half = k // 2
    tau2 = (diffs**2).mean(axis=-1)
    lam = 2.0 / k * (diffs[..., 0 : 2 * half : 2] * diffs[..., 1 : 2 * half : 2]).sum(axis=-1)
    variance = tau2 - 0.5 * lam
    clipped = variance <= 0.0
    return tau2, lam, np.where(clipped, VARIANCE_FLOOR * tau2, variance), clipped


def pair_variance(diffs: np.ndarray) -> PairVariance:
    tau2, lam, variance, clipped = pair_variance_batch(np.asarray(diffs, dtype=float)[None])
    return PairVariance(tau2=float(tau2[0]), lam=float(lam[0]), variance=float(variance[0]), clipped=bool(clipped[0]))


def paired_difference_batch(data: np.ndarray, sample: Sample, cfg: PairedDifferenceCfg, strict: bool) -> np.ndarray:
    """``sqrt(k)`` times the mean pair difference, optionally divided by ``sqrt(V)``.

    ``data`` holds the treatment indicators and the fixed coordinate the outcomes. Pair labels must be numbered in
    covariate order.
    """
    if sample.pairs is None or sample.fixed is None:
        raise StructuralError("The paired difference requires pair labels and outcomes on the sample.")
    members = pair_members(sample.pairs)
    diffs = pair_differences(data, sample.fixed, members)
    values = np.sqrt(members.shape[0]) * diffs.mean(axis=-1)
    if cfg.studentize:
        _, _, variance, _ = pair_variance_batch(diffs)
        values = studentize(values, np.sqrt(variance), strict, "pair variance estimate")
    return finish(values, cfg.absolute)
