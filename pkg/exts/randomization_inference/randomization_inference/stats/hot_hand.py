"""Streak statistics for binary make/miss sequences."""

from __future__ import annotations

import numpy as np
from collections.abc import Sequence
from typing import TYPE_CHECKING

from ..errors import ParameterError, StructuralError
from .common import check_defined

if TYPE_CHECKING:
    from ..sample import Sample
    from . import statistics_cfg


def _check_binary(x: np.ndarray):
    if not np.all((x == 0) | (x == 1)):
        raise StructuralError("Streak statistics require a binary (0/1) series.")


def _streak_rates(x: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Make rates right after ``k`` makes and right after ``k`` misses, NaN when the streak set is empty."""
    x = np.asarray(x, dtype=float)
    n = x.shape[-1]
    cumulative = np.concatenate([np.zeros(x.shape[:-1] + (1,)), np.cumsum(x, axis=-1)], axis=-1)
    # number of makes among the k outcomes preceding index j, for j = k, ..., n - 1
    preceding = cumulative[..., k:n] - cumulative[..., 0 : n - k]
    outcomes = x[..., k:]
    after_makes = preceding == k
    after_misses = preceding == 0
    with np.errstate(divide="ignore", invalid="ignore"):
        make_rate = (outcomes * after_makes).sum(axis=-1) / after_makes.sum(axis=-1)
        miss_rate = (outcomes * after_misses).sum(axis=-1) / after_misses.sum(axis=-1)
    return make_rate, miss_rate


def _prepare(x: Sequence[int] | np.ndarray, k: int) -> np.ndarray:
    x = np.asarray(x).reshape(-1)
    _check_streak_length(k, x.shape[0])
    _check_binary(x)
    return x.astype(float)


def _check_streak_length(k: int, n: int):
    if k < 1 or k >= n:
        raise ParameterError(f"The streak length must satisfy 1 <= k < n = {n}, received {k}.")


def hot_hand_rate(x: Sequence[int] | np.ndarray, k: int = 1) -> float:
    """Make rate immediately after ``k`` consecutive makes.

    Raises:
        UndefinedStatisticError: When no index follows a streak of ``k`` makes.
    """
    make_rate, _ = _streak_rates(_prepare(x, k)[None], k)
    return float(check_defined(make_rate, True, f"make rate after {k} makes")[0])


def hot_hand_diff(x: Sequence[int] | np.ndarray, k: int = 1) -> float:
    """Difference between the make rate after ``k`` makes and the make rate after ``k`` misses.

    Indices count as "after k makes" (``Make_k``) when the ``k`` preceding outcomes are all makes, and as
    "after k misses" (``Miss_k``) when they are all misses.

    Raises:
        ParameterError: When ``k < 1`` or ``k >= n``.
        StructuralError: When the series is not binary.
        UndefinedStatisticError: When ``Make_k`` or ``Miss_k`` is empty.
    """
    make_rate, miss_rate = _streak_rates(_prepare(x, k)[None], k)
    return float(check_defined(make_rate - miss_rate, True, f"streak difference with k={k}")[0])


def hot_hand_sigma2(q: float, k: int) -> float:
    """Limiting variance ``sigma_k^2(q) = (q (1 - q))^(1 - k) ((1 - q)^k + q^k)`` of the scaled streak difference.

    Raises:
        ParameterError: When ``q`` is outside (0, 1) or ``k < 1``.
    """
    if not 0.0 < q < 1.0:
        raise ParameterError(f"The make probability must lie in (0, 1), received {q}.")
    if k < 1:
        raise ParameterError(f"The streak length must be at least 1, received {k}.")
    return float((q * (1.0 - q)) ** (1 - k) * ((1.0 - q) ** k + q**k))


def hot_hand_batch(data: np.ndarray, sample: Sample, cfg: statistics_cfg.HotHandCfg, strict: bool) -> np.ndarray:
    _check_streak_length(cfg.streak_length, data.shape[-1])
    if strict:
        _check_binary(data)
    make_rate, miss_rate = _streak_rates(data, cfg.streak_length)
    stat = make_rate - miss_rate if cfg.difference else make_rate
    return check_defined(stat, strict, f"streak statistic with k={cfg.streak_length}")
