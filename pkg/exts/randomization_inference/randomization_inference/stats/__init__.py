"""Sub-package with the catalogue of unstudentized and studentized test statistics."""

from .association import correlation, studentized_correlation
from .hot_hand import hot_hand_diff, hot_hand_rate, hot_hand_sigma2
from .one_sample import abs_mean, studentized_mean
from .statistics_cfg import (
    STATISTIC_CFGS,
    AbsMeanCfg,
    AutocorrCfg,
    CorrelationCfg,
    HotellingCfg,
    HotHandCfg,
    HotHandDiffCfg,
    KSampleCfg,
    MannKendallCfg,
    MatchCountCfg,
    MeanCfg,
    MeanDiffCfg,
    StatisticCfg,
    StudentizedAutocorrCfg,
    StudentizedCorrelationCfg,
    StudentizedMannKendallCfg,
    StudentizedMeanDiffCfg,
    StudentizedWilcoxonCfg,
    TwoSampleStatisticCfg,
    WilcoxonCfg,
)
from .time_series import autocorr, autocorr_studentizer, mann_kendall, studentized_mann_kendall
from .two_sample import (
    hotelling_studentized,
    k_sample_stat,
    match_count,
    mean_diff,
    studentized_mean_diff,
    studentized_wilcoxon,
    wilcoxon,
)
