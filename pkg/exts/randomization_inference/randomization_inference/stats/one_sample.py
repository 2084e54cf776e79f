"""One-sample location statistics for the sign-change group."""

from __future__ import annotations

import numpy as np
from collections.abc import Sequence
from typing import TYPE_CHECKING

from ..errors import StructuralError
from ..sample import Sample
from .common import finish, studentize

if TYPE_CHECKING:
    from . import statistics_cfg


def _as_vector(x: Sequence[float] | np.ndarray, min_size: int = 1) -> np.ndarray:
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape[0] < min_size:
        raise StructuralError(f"The sample must contain at least {min_size} observation(s), received {x.shape[0]}.")
    return x


def abs_mean(x: Sequence[float] | np.ndarray) -> float:
    """Absolute sample mean ``|mean(x)|``."""
    return float(np.abs(_as_vector(x).mean()))


def studentized_mean(x: Sequence[float] | np.ndarray) -> float:
    """One-sample t-type statistic ``sqrt(n) * mean(x) / sd(x)`` with the 1/n standard deviation.

    Raises:
        DegenerateScaleError: When the sample is constant.
    """
    x = _as_vector(x, min_size=2)
    return float(studentize(np.sqrt(x.shape[0]) * x.mean(), x.std(), True, "sample standard deviation"))


"""
Batch evaluators.
"""


def abs_mean_batch(data: np.ndarray, sample: Sample, cfg: statistics_cfg.AbsMeanCfg, strict: bool) -> np.ndarray:
    return np.abs(data.mean(axis=-1))


def mean_batch(data: np.ndarray, sample: Sample, cfg: statistics_cfg.MeanCfg, strict: bool) -> np.ndarray:
    n = data.shape[-1]
    if not cfg.studentize:
        return finish(data.mean(axis=-1), cfg.absolute)
    stat = studentize(np.sqrt(n) * data.mean(axis=-1), data.std(axis=-1), strict, "sample standard deviation")
    return finish(stat, cfg.absolute)
