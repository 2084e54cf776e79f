"""Sub-package with approximate randomization tests for a small number of clusters."""

from .art import TTestDecision, art_confidence_interval, art_run_cfg, art_statistic, art_test, im_ttest, im_ttest_valid
from .art_cfg import ART_STATISTIC_CFGS, ArtStatisticCfg, TStatCfg, WaldCfg
from .art_statistics import tstat_batch, wald_batch
from .cluster_scores import ClusterScores, cluster_ols, cluster_scores_ols, time_series_blocks
