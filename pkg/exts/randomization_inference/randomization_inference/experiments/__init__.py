"""Sub-package with treatment-assignment schemes and randomization tests for randomized experiments."""

from .assignment import Design, assign, check_conforms, draw_assignments, make_design
from .assignment_cfg import (
    ASSIGNMENT_CFGS,
    AssignmentCfg,
    CompleteRandomizationCfg,
    MatchedPairsCfg,
    SimpleRandomCfg,
    StratifiedBlockCfg,
)
from .experiment_sample import ExperimentSample
from .inference import (
    pair_variance_report,
    scheme_group,
    strong_null_test,
    strong_null_test_resampled,
    weak_null_confidence_interval,
    weak_null_test_pairs,
)
from .inference_cfg import PairedDifferenceCfg
from .paired_difference import PairVariance
from .pairing import Pairing, greedy_matcher, pair_by_covariates, sort_matcher
