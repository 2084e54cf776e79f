"""Configuration classes selecting a test statistic.

Every configuration points at a batch evaluator ``func(data, sample, cfg, strict) -> np.ndarray`` that maps a
batch of transformed acted-on coordinates of shape (B, n[, d]) to B statistic values.
"""

from __future__ import annotations

import dataclasses
import numpy as np
from collections.abc import Callable
from dataclasses import MISSING, dataclass
from typing import ClassVar, Literal

from ..sample import Sample
from . import association, hot_hand, one_sample, time_series, two_sample


@dataclass(kw_only=True)
class StatisticCfg:
    """Base configuration of a test statistic."""

    statistic_id: ClassVar[str] = "statistic"
    """Identifier reported in results."""

    func: Callable[..., np.ndarray] = MISSING
    """Batch evaluator of the statistic."""
    absolute: bool = False
    """Whether to use the absolute value (two-sided test). Defaults to False."""
    undefined_policy: Literal["raise", "exclude"] = "raise"
    """What to do when the statistic is undefined on a transformed sample. Defaults to "raise".

    With "exclude" the affected group elements are dropped from the randomization distribution, their count is
    reported and the p-value uses the reduced number of elements.
    """
    degenerate_policy: Literal["raise", "extend"] = "raise"
    """What to do when the studentizing scale of the observed sample is zero. Defaults to "raise".

    With "extend" the observed statistic follows the same convention as the transformed ones: ``+inf`` for a
    non-zero numerator and ``0`` otherwise.
    """

    def evaluate(self, data: np.ndarray, sample: Sample, strict: bool = False) -> np.ndarray:
        """Evaluate the statistic on a batch of acted-on coordinates."""
        return np.asarray(self.func(data, sample, self, strict), dtype=float).reshape(-1)

    def describe(self) -> str:
        return self.statistic_id

    def to_dict(self) -> dict:
        return {"statistic_id": self.statistic_id, **dataclasses.asdict(self)}


"""
One sample.
"""


@dataclass(kw_only=True)
class AbsMeanCfg(StatisticCfg):
    """Configuration for the absolute sample mean."""

    statistic_id: ClassVar[str] = "abs_mean"

    func: Callable[..., np.ndarray] = one_sample.abs_mean_batch


@dataclass(kw_only=True)
class MeanCfg(StatisticCfg):
    """Configuration for the sample mean, optionally studentized as a one-sample t-type statistic."""

    statistic_id: ClassVar[str] = "mean"

    func: Callable[..., np.ndarray] = one_sample.mean_batch
    studentize: bool = False
    """Whether to divide by the sample standard deviation. Defaults to False."""


"""
Two samples.
"""


@dataclass(kw_only=True)
class TwoSampleStatisticCfg(StatisticCfg):
    """Base configuration of statistics comparing two samples."""

    layout: Literal["pooled", "assignment"] = "pooled"
    """Sample layout. Defaults to "pooled".

    "pooled": the group permutes pooled outcomes and the fixed coordinate holds 0/1 labels.
    "assignment": the group permutes 0/1 treatment indicators and the fixed coordinate holds outcomes.
    """
    studentize: bool = False
    """Whether to studentize. Defaults to False."""


@dataclass(kw_only=True)
class MeanDiffCfg(TwoSampleStatisticCfg):
    """Configuration for the difference in means."""

    statistic_id: ClassVar[str] = "mean_diff"

    func: Callable[..., np.ndarray] = two_sample.mean_diff_batch
    root: Literal["m", "N"] = "m"
    """Root scaling of the difference: ``sqrt(m)`` or ``sqrt(N)``. Defaults to "m"."""

    def describe(self) -> str:
        return "studentized_mean_diff" if self.studentize else self.statistic_id


@dataclass(kw_only=True)
class StudentizedMeanDiffCfg(MeanDiffCfg):
    """Configuration for the studentized difference in means."""

    statistic_id: ClassVar[str] = "studentized_mean_diff"

    studentize: bool = True


@dataclass(kw_only=True)
class WilcoxonCfg(TwoSampleStatisticCfg):
    """Configuration for the Wilcoxon statistic. The two-sided form uses ``|W - 1/2|``."""

    statistic_id: ClassVar[str] = "wilcoxon"

    func: Callable[..., np.ndarray] = two_sample.wilcoxon_batch

    def describe(self) -> str:
        return "studentized_wilcoxon" if self.studentize else self.statistic_id


@dataclass(kw_only=True)
class StudentizedWilcoxonCfg(WilcoxonCfg):
    """Configuration for the studentized Wilcoxon statistic."""

    statistic_id: ClassVar[str] = "studentized_wilcoxon"

    studentize: bool = True


@dataclass(kw_only=True)
class KSampleCfg(StatisticCfg):
    """Configuration for the k-sample generalized Behrens-Fisher statistic. Labels are ``0, ..., k - 1``."""

    statistic_id: ClassVar[str] = "k_sample"

    func: Callable[..., np.ndarray] = two_sample.k_sample_batch
    ddof: int = 0
    """Delta degrees of freedom of the within-group variances. Defaults to 0."""


@dataclass(kw_only=True)
class HotellingCfg(StatisticCfg):
    """Configuration for the modified Hotelling statistic."""

    statistic_id: ClassVar[str] = "hotelling"

    func: Callable[..., np.ndarray] = two_sample.hotelling_batch
    condition_threshold: float = two_sample.DEFAULT_CONDITION_THRESHOLD
    """Largest accepted condition number of the covariance estimate. Defaults to 1e12."""


@dataclass(kw_only=True)
class MatchCountCfg(StatisticCfg):
    """Configuration for the number of positions where permuted labels agree with reference labels."""

    statistic_id: ClassVar[str] = "match_count"

    func: Callable[..., np.ndarray] = two_sample.match_count_batch


"""
Association and time series.
"""


@dataclass(kw_only=True)
class CorrelationCfg(StatisticCfg):
    """Configuration for the scaled correlation ``sqrt(n) * rho``."""

    statistic_id: ClassVar[str] = "correlation"

    func: Callable[..., np.ndarray] = association.correlation_batch
    studentize: bool = False
    """Whether to divide by the fourth-moment scale ``V``. Defaults to False."""

    def describe(self) -> str:
        return "studentized_correlation" if self.studentize else self.statistic_id


@dataclass(kw_only=True)
class StudentizedCorrelationCfg(CorrelationCfg):
    """Configuration for the studentized correlation."""

    statistic_id: ClassVar[str] = "studentized_correlation"

    studentize: bool = True


@dataclass(kw_only=True)
class AutocorrCfg(StatisticCfg):
    """Configuration for the scaled lag-k autocorrelation."""

    statistic_id: ClassVar[str] = "autocorr"

    func: Callable[..., np.ndarray] = time_series.autocorr_batch
    lag: int = 1
    """The lag k. Defaults to 1."""
    studentize: bool = False
    """Whether to divide by the plug-in standard deviation. Defaults to False."""
    truncation_lag: int | None = None
    """Bartlett truncation lag. Defaults to None, in which case ``floor(n^(1/3))`` is used."""

    def describe(self) -> str:
        return f"{'studentized_' if self.studentize else ''}autocorr({self.lag})"


@dataclass(kw_only=True)
class StudentizedAutocorrCfg(AutocorrCfg):
    """Configuration for the plug-in studentized autocorrelation."""

    statistic_id: ClassVar[str] = "studentized_autocorr"

    studentize: bool = True


@dataclass(kw_only=True)
class MannKendallCfg(StatisticCfg):
    """Configuration for the Mann-Kendall trend statistic."""

    statistic_id: ClassVar[str] = "mann_kendall"

    func: Callable[..., np.ndarray] = time_series.mann_kendall_batch
    studentize: bool = False
    """Whether to divide by the plug-in rank long-run scale. Defaults to False."""
    truncation_lag: int | None = None
    """Bartlett truncation lag. Defaults to None, in which case ``floor(n^(1/3))`` is used."""

    def describe(self) -> str:
        return "studentized_mann_kendall" if self.studentize else self.statistic_id


@dataclass(kw_only=True)
class StudentizedMannKendallCfg(MannKendallCfg):
    """Configuration for the plug-in studentized Mann-Kendall statistic."""

    statistic_id: ClassVar[str] = "studentized_mann_kendall"

    studentize: bool = True


@dataclass(kw_only=True)
class HotHandCfg(StatisticCfg):
    """Configuration for the make rate after a streak of makes."""

    statistic_id: ClassVar[str] = "hot_hand"

    func: Callable[..., np.ndarray] = hot_hand.hot_hand_batch
    streak_length: int = 1
    """The streak length k. Defaults to 1."""
    difference: bool = False
    """Whether to subtract the make rate after k misses. Defaults to False."""
    undefined_policy: Literal["raise", "exclude"] = "exclude"

    def describe(self) -> str:
        return f"{self.statistic_id}({self.streak_length})"


@dataclass(kw_only=True)
class HotHandDiffCfg(HotHandCfg):
    """Configuration for the streak difference statistic ``D_k``."""

    statistic_id: ClassVar[str] = "hot_hand_diff"

    difference: bool = True


STATISTIC_CFGS: dict[str, type[StatisticCfg]] = {
    cfg.statistic_id: cfg
    for cfg in (
        AbsMeanCfg,
        MeanCfg,
        MeanDiffCfg,
        StudentizedMeanDiffCfg,
        WilcoxonCfg,
        StudentizedWilcoxonCfg,
        KSampleCfg,
        HotellingCfg,
        MatchCountCfg,
        CorrelationCfg,
        StudentizedCorrelationCfg,
        AutocorrCfg,
        StudentizedAutocorrCfg,
        MannKendallCfg,
        StudentizedMannKendallCfg,
        HotHandCfg,
        HotHandDiffCfg,
    )
}
"""Statistic identifiers used by the command-line front end."""
