"""Configuration of the cluster sign-change statistics."""

from __future__ import annotations

import numpy as np
from collections.abc import Callable
from dataclasses import dataclass
from typing import ClassVar, Literal

from ..stats.statistics_cfg import StatisticCfg
from ..stats.two_sample import DEFAULT_CONDITION_THRESHOLD
from . import art_statistics


@dataclass(kw_only=True)
class ArtStatisticCfg(StatisticCfg):
    """Base configuration of statistics of cluster scores.

    A degenerate scale follows the extended convention (``+inf`` or ``0``) on the observed scores too.
    """

    degenerate_policy: Literal["raise", "extend"] = "extend"


@dataclass(kw_only=True)
class WaldCfg(ArtStatisticCfg):
    """Configuration for the Wald statistic ``q * mean(S)' Sigma^-1 mean(S)``."""

    statistic_id: ClassVar[str] = "wald"

    func: Callable[..., np.ndarray] = art_statistics.wald_batch
    center_covariance: bool = True
    """Whether Sigma averages outer products of the centered scores. Defaults to True.

    With False the outer products of the raw scores are averaged, which is invariant under sign changes.
    """
    condition_threshold: float = DEFAULT_CONDITION_THRESHOLD
    """Condition number above which Sigma counts as singular. Defaults to 1e12."""


@dataclass(kw_only=True)
class TStatCfg(ArtStatisticCfg):
    """Configuration for the cluster t-statistic ``|mean(S)| / sd(S)``."""

    statistic_id: ClassVar[str] = "tstat"

    func: Callable[..., np.ndarray] = art_statistics.tstat_batch
    absolute: bool = True


ART_STATISTIC_CFGS: dict[str, type[ArtStatisticCfg]] = {cfg.statistic_id: cfg for cfg in (WaldCfg, TStatCfg)}
"""Statistic identifiers used by the command-line front end."""
