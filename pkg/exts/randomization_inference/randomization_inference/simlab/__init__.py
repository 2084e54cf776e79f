"""Sub-package with synthetic data generators and Monte Carlo calibration studies."""

from . import studies_cfg
from .generators_cfg import (
    GENERATOR_CFGS,
    BernoulliSeriesCfg,
    EarningsPopulationCfg,
    GeneratorCfg,
    HeterogeneousPairsCfg,
    HeteroskedasticClusterScoresCfg,
    LinearModelCfg,
    ProductDependenceCfg,
    SymmetricOneSampleCfg,
    TwoPopulationCfg,
)
from .level_tests_cfg import (
    ArtLevelTestCfg,
    LevelTestCfg,
    RandomizationLevelTestCfg,
    TTestLevelTestCfg,
    WeakPairsLevelTestCfg,
)
from .registry import StudySpec, make_cfg, register, registry, run_study
from .studies import HotHandDiagnostics, run_hot_hand_study, run_level_study
from .studies_cfg import ScenarioCfg

"""
Level studies.
"""

register(
    id="sign_test_level",
    entry_point="randomization_inference.simlab.studies:level_study",
    cfg_entry_point=studies_cfg.SignTestLevelCfg,
    description="sign-change test on symmetric data: exact randomized and Monte Carlo p-value rejection rates",
)

register(
    id="unequal_variances",
    entry_point="randomization_inference.simlab.studies:unequal_variances_study",
    cfg_entry_point=studies_cfg.UnequalVariancesCfg,
    description="unstudentized vs studentized difference in means, unequal variances, over the share p",
)

register(
    id="earnings",
    entry_point="randomization_inference.simlab.studies:earnings_study",
    cfg_entry_point=studies_cfg.EarningsStudyCfg,
    description="difference-in-means tests on synthetic earnings populations, original and rescaled",
)

register(
    id="correlation",
    entry_point="randomization_inference.simlab.studies:level_study",
    cfg_entry_point=studies_cfg.CorrelationStudyCfg,
    description="permutation tests of zero correlation for uncorrelated but dependent pairs Y = ZX",
)

register(
    id="weak_null_pairs",
    entry_point="randomization_inference.simlab.studies:level_study",
    cfg_entry_point=studies_cfg.WeakNullPairsCfg,
    description="matched-pair tests of a zero average effect under heterogeneous effects",
)

register(
    id="cluster_art",
    entry_point="randomization_inference.simlab.studies:level_study",
    cfg_entry_point=studies_cfg.ClusterArtStudyCfg,
    description="cluster sign-change tests and the Student-t comparison with heteroskedastic cluster scores",
)

"""
Coverage and distribution studies.
"""

register(
    id="conformal_coverage",
    entry_point="randomization_inference.simlab.studies:conformal_coverage_study",
    cfg_entry_point=studies_cfg.ConformalCoverageCfg,
    description="coverage of conformal upper bounds and split (optionally full) conformal intervals",
)

register(
    id="hot_hand",
    entry_point="randomization_inference.simlab.studies:hot_hand_study",
    cfg_entry_point=studies_cfg.HotHandStudyCfg,
    description="randomization distribution of the streak difference vs its normal approximation",
)
