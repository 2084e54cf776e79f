"""Sub-package with the general randomization-test construction in exact and Monte Carlo mode."""

from .inversion import GridInterval, invert_over_grid
from .randomization_test import (
    Decision,
    RandomizationResult,
    critical_index,
    decide,
    observed_statistic,
    run_exact,
    run_mc,
    run_on_transformed,
    run_test,
    summarize,
)
from .randomization_test_cfg import DEFAULT_NUM_SAMPLES, RandomizationTestCfg
