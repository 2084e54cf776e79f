"""One rejection decision per simulated data set.

Every function has the signature ``func(cfg, draw, alpha, rng) -> bool``. Monte Carlo seeds and randomized
decisions are drawn from ``rng`` so that a replication is a deterministic function of its stream.
"""

from __future__ import annotations

import numpy as np
from typing import TYPE_CHECKING, Any

from ..cluster_art.art import art_test, im_ttest
from ..cluster_art.cluster_scores import ClusterScores
from ..engine.randomization_test import RandomizationResult, decide, run_test
from ..engine.randomization_test_cfg import RandomizationTestCfg
from ..errors import ParameterError, StructuralError
from ..experiments.experiment_sample import ExperimentSample
from ..experiments.inference import weak_null_test_pairs
from ..sample import Sample
from ..utils.rng import draw_seed

if TYPE_CHECKING:
    from . import level_tests_cfg

P_VALUE_RTOL = 1e-12
"""Relative slack of the comparison ``p_hat <= alpha``."""


def as_sample(draw: Any) -> Sample:
    """The randomization layout of a simulated data set."""
    if isinstance(draw, Sample):
        return draw
    if isinstance(draw, (ExperimentSample, ClusterScores)):
        return draw.to_sample()
    raise StructuralError(f"Cannot run a randomization test on a draw of type '{type(draw).__name__}'.")


def run_cfg(cfg: level_tests_cfg.LevelTestCfg, alpha: float, rng: np.random.Generator) -> RandomizationTestCfg:
    """Run configuration of one replication. Monte Carlo seeds are drawn from ``rng``."""
    if cfg.mode == "exact":
        return RandomizationTestCfg(alpha=alpha, mode="exact")
    return RandomizationTestCfg(alpha=alpha, mode="mc", num_samples=cfg.b - 1, seed=draw_seed(rng))


def rejects(result: RandomizationResult, rule: str, alpha: float, rng: np.random.Generator) -> bool:
    """Apply a rejection rule.

    "p_value" rejects when ``p_hat <= alpha``, "critical" when ``t_obs > T(k)`` and "randomized" with probability
    ``phi``.
    """
    if rule == "p_value":
        return bool(result.p_hat <= alpha * (1.0 + P_VALUE_RTOL))
    if rule == "critical":
        return decide(result).reject
    if rule == "randomized":
        return decide(result, randomized=True, rng=rng).reject
    raise ParameterError(f"Unknown rejection rule '{rule}'. Expected 'p_value', 'critical' or 'randomized'.")


def randomization_level_test(
    cfg: level_tests_cfg.RandomizationLevelTestCfg, draw: Any, alpha: float, rng: np.random.Generator
) -> bool:
    sample = as_sample(draw)
    result = run_test(sample, cfg.statistic, cfg.group.build(sample), run_cfg(cfg, alpha, rng))
    return rejects(result, cfg.rule, alpha, rng)


def weak_pairs_level_test(
    cfg: level_tests_cfg.WeakPairsLevelTestCfg, draw: ExperimentSample, alpha: float, rng: np.random.Generator
) -> bool:
    result = weak_null_test_pairs(draw, 0.0, cfg=run_cfg(cfg, alpha, rng), studentize=cfg.studentize)
    return rejects(result, cfg.rule, alpha, rng)


def art_level_test(
    cfg: level_tests_cfg.ArtLevelTestCfg, draw: ClusterScores, alpha: float, rng: np.random.Generator
) -> bool:
    result = art_test(draw, cfg.statistic, run_cfg(cfg, alpha, rng))
    return rejects(result, cfg.rule, alpha, rng)


def ttest_level_test(
    cfg: level_tests_cfg.TTestLevelTestCfg, draw: ClusterScores, alpha: float, rng: np.random.Generator
) -> bool:
    return im_ttest(draw, alpha).reject
