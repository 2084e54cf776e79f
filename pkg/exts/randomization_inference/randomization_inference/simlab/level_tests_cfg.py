"""Configuration classes of the tests compared in level studies."""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import MISSING, dataclass, field
from typing import Literal

from ..cluster_art.art_cfg import ArtStatisticCfg, TStatCfg
from ..groups.groups_cfg import GroupCfg
from ..stats.statistics_cfg import StatisticCfg
from . import level_tests


@dataclass(kw_only=True)
class LevelTestCfg:
    """Base configuration of a test run once per replication."""

    name: str = MISSING
    """Label of the test in the rejection-rate table."""
    func: Callable[..., bool] = MISSING
    """Function ``func(cfg, draw, alpha, rng)`` returning whether the test rejects."""
    mode: Literal["exact", "mc"] = "mc"
    """Enumeration mode of the randomization test. Defaults to "mc"."""
    b: int = 2000
    """Group elements per Monte Carlo run, the identity included. Defaults to 2000."""
    rule: Literal["p_value", "critical", "randomized"] = "p_value"
    """Rejection rule. Defaults to "p_value" (reject when ``p_hat <= alpha``)."""

    def to_dict(self) -> dict:
        return {"name": self.name, "mode": self.mode, "b": self.b, "rule": self.rule}


@dataclass(kw_only=True)
class RandomizationLevelTestCfg(LevelTestCfg):
    """Randomization test of a statistic under a group built from the simulated sample."""

    func: Callable[..., bool] = level_tests.randomization_level_test
    statistic: StatisticCfg = MISSING
    """The test statistic."""
    group: GroupCfg = MISSING
    """The transformation group."""

    def to_dict(self) -> dict:
        return {**super().to_dict(), "statistic": self.statistic.describe(), "group": self.group.to_dict()}


@dataclass(kw_only=True)
class WeakPairsLevelTestCfg(LevelTestCfg):
    """Weak-null test of a matched-pair experiment."""

    func: Callable[..., bool] = level_tests.weak_pairs_level_test
    studentize: bool = True
    """Whether to studentize the mean pair difference. Defaults to True."""

    def to_dict(self) -> dict:
        return {**super().to_dict(), "studentize": self.studentize}


@dataclass(kw_only=True)
class ArtLevelTestCfg(LevelTestCfg):
    """Cluster sign-change test on simulated cluster scores."""

    func: Callable[..., bool] = level_tests.art_level_test
    mode: Literal["exact", "mc"] = "exact"
    statistic: ArtStatisticCfg = field(default_factory=TStatCfg)
    """The cluster statistic. Defaults to the t-statistic."""

    def to_dict(self) -> dict:
        return {**super().to_dict(), "statistic": self.statistic.describe()}


@dataclass(kw_only=True)
class TTestLevelTestCfg(LevelTestCfg):
    """Student-t comparison of the cluster t-statistic."""

    func: Callable[..., bool] = level_tests.ttest_level_test
