"""Randomization tests of strong and weak null hypotheses in randomized experiments.

Strong nulls (equal conditional distributions of the potential outcomes) are tested exactly with the group that
matches the assignment scheme: all permutations of the treatments for simple random sampling and complete
randomization, permutations within strata for stratified block randomization and swaps within pairs for
matched-pair designs. The weak null of equal means in matched-pair designs is tested with the studentized
difference in means.
"""

from __future__ import annotations

import dataclasses
import logging
import numpy as np

from ..engine.inversion import GridInterval, invert_over_grid
from ..engine.randomization_test import RandomizationResult, run_on_transformed, run_test
from ..engine.randomization_test_cfg import RandomizationTestCfg
from ..errors import ParameterError, StructuralError
from ..groups.group_kinds import FullPermutation, GroupKind, PairSwap, StratifiedPermutation
from ..stats.statistics_cfg import MeanDiffCfg, StatisticCfg, TwoSampleStatisticCfg
from ..utils.rng import BIT_GENERATOR_NAME, make_rng, resolve_seed
from .assignment import Design, check_conforms, draw_assignments
from .assignment_cfg import AssignmentCfg, MatchedPairsCfg
from .experiment_sample import ExperimentSample
from .inference_cfg import PairedDifferenceCfg
from .paired_difference import PairVariance, pair_differences, pair_variance

logger = logging.getLogger(__name__)


def _resolve_statistic(statistic_cfg: StatisticCfg | None) -> StatisticCfg:
    if statistic_cfg is None:
        return MeanDiffCfg(layout="assignment", absolute=True)
    if isinstance(statistic_cfg, TwoSampleStatisticCfg):
        if statistic_cfg.layout != "assignment":
            statistic_cfg = dataclasses.replace(statistic_cfg, layout="assignment")
        return statistic_cfg
    if isinstance(statistic_cfg, PairedDifferenceCfg):
        return statistic_cfg
    raise StructuralError(
        f"Statistic '{statistic_cfg.describe()}' does not compare treated and control outcomes."
        " Use a two-sample statistic (mean_diff, studentized_mean_diff, wilcoxon, studentized_wilcoxon)"
        " or the paired difference."
    )


def scheme_group(scheme_cfg: AssignmentCfg, x: ExperimentSample) -> GroupKind:
    """Group of treatment reassignments that leaves the scheme's assignment distribution invariant."""
    sample = x.to_sample()
    if scheme_cfg.scheme_id in ("simple_random", "complete"):
        return FullPermutation(x.n)
    if scheme_cfg.scheme_id == "stratified_block":
        if sample.strata is None:
            raise StructuralError("Stratified block randomization requires stratum labels on the sample.")
        return StratifiedPermutation(sample.strata)
    if scheme_cfg.scheme_id == "matched_pairs":
        if sample.pairs is None:
            raise StructuralError("Matched-pair designs require pair labels on the sample.")
        return PairSwap(sample.pairs)
    raise StructuralError(f"Unknown assignment scheme '{scheme_cfg.scheme_id}'.")


def strong_null_test(
    x: ExperimentSample,
    scheme_cfg: AssignmentCfg,
    statistic_cfg: StatisticCfg | None = None,
    cfg: RandomizationTestCfg | None = None,
) -> RandomizationResult:
    """Test that treatment has no effect on the distribution of outcomes.

    Args:
        x: The experiment.
        scheme_cfg: The scheme the treatments were drawn from.
        statistic_cfg: Statistic comparing treated and control outcomes. Two-sample statistics are switched to the
            "assignment" layout. Defaults to None, in which case the absolute difference in means is used.
        cfg: Run configuration. Defaults to None, in which case exact enumeration at level 0.05 is used.

    Raises:
        StructuralError: When the sample does not conform to the scheme.
    """
    check_conforms(scheme_cfg, x)
    statistic_cfg = _resolve_statistic(statistic_cfg)
    group = scheme_group(scheme_cfg, x)
    result = run_test(x.to_sample(), statistic_cfg, group, cfg)
    result.extras["scheme"] = scheme_cfg.scheme_id
    return result


def strong_null_test_resampled(
    x: ExperimentSample,
    scheme_cfg: AssignmentCfg,
    statistic_cfg: StatisticCfg | None = None,
    b: int | None = None,
    seed: int | None = None,
    cfg: RandomizationTestCfg | None = None,
    design: Design | None = None,
) -> RandomizationResult:
    """Strong-null test that redraws the treatments from the scheme instead of acting with a group.

    The observed treatments are the first of ``b`` assignment vectors and the other ``b - 1`` are drawn i.i.d. from
    the scheme given the covariates.

    Args:
        x: The experiment.
        scheme_cfg: The scheme the treatments were drawn from.
        statistic_cfg: Statistic comparing treated and control outcomes. Defaults to None, in which case the
            absolute difference in means is used.
        b: Total number of assignment vectors, the observed one included. Defaults to None, in which case
            ``cfg.num_samples + 1`` is used.
        seed: 64-bit seed. Defaults to None, in which case ``cfg.seed`` (or a fresh seed) is used.
        cfg: Run configuration. Defaults to None.
        design: Design to redraw from. Defaults to None, in which case the strata and pairs of ``x`` are used.

    Raises:
        ParameterError: When ``b < 2``.
        StructuralError: When the sample does not conform to the scheme.
    """
    cfg = RandomizationTestCfg() if cfg is None else cfg
    num_draws = cfg.num_samples if b is None else b - 1
    if num_draws < 1:
        raise ParameterError(f"The resampled test requires b >= 2 assignment vectors, received {num_draws + 1}.")
    check_conforms(scheme_cfg, x)
    statistic_cfg = _resolve_statistic(statistic_cfg)
    design = Design.from_sample(x) if design is None else design
    resolved_seed = resolve_seed(seed if seed is not None else cfg.seed)
    draws = draw_assignments(scheme_cfg, design, make_rng(resolved_seed), num_draws)
    transformed = np.concatenate([x.d[None], draws], axis=0)
    result = run_on_transformed(
        x.to_sample(),
        statistic_cfg,
        transformed,
        cfg,
        mode="mc",
        group=f"Resampled({scheme_cfg.scheme_id})",
        seed=resolved_seed,
        bit_generator=BIT_GENERATOR_NAME,
    )
    result.extras["scheme"] = scheme_cfg.scheme_id
    return result


def pair_variance_report(x: ExperimentSample, theta0: float = 0.0) -> PairVariance:
    """Variance report of the shifted matched-pair sample."""
    shifted = x.shifted(theta0)
    members = shifted.pair_order()
    return pair_variance(pair_differences(shifted.d, shifted.y, members))


def weak_null_test_pairs(
    x: ExperimentSample,
    theta0: float = 0.0,
    cfg: RandomizationTestCfg | None = None,
    studentize: bool = True,
) -> RandomizationResult:
    """Test that the average treatment effect equals ``theta0`` in a matched-pair experiment.

    Outcomes are shifted to ``Y - theta0 * D`` and the (studentized) mean pair difference is compared with its
    distribution over all within-pair swaps. The variance report is stored in ``result.extras``.

    Args:
        x: Matched-pair experiment with at least two pairs.
        theta0: Hypothesized average treatment effect. Defaults to 0.
        cfg: Run configuration. Defaults to None, in which case exact enumeration at level 0.05 is used.
        studentize: Whether to studentize the difference in means. Defaults to True.

    Raises:
        StructuralError: When the sample is not a matched-pair sample with two or more pairs.
    """
    cfg = RandomizationTestCfg() if cfg is None else cfg
    check_conforms(MatchedPairsCfg(), x)
    shifted = x.shifted(theta0)
    members = shifted.pair_order()
    if members.shape[0] < 2:
        raise StructuralError(f"The weak-null pair test requires at least two pairs, received {members.shape[0]}.")
    diffs = pair_differences(shifted.d, shifted.y, members)
    report = pair_variance(diffs)
    warnings = []
    if studentize and report.clipped:
        message = (
            f"The pair variance estimate {report.tau2 - 0.5 * report.lam:.6g} is not positive; clipped to"
            f" {report.variance:.6g}."
        )
        logger.warning(message)
        warnings.append(message)
    sample = shifted.to_sample()
    result = run_test(sample, PairedDifferenceCfg(studentize=studentize), PairSwap(sample.pairs), cfg)
    result.warnings[:0] = warnings
    result.extras.update(
        scheme="matched_pairs",
        theta0=theta0,
        num_pairs=int(members.shape[0]),
        estimate=float(pair_differences(x.d, x.y, members).mean()),
        **report.to_dict(),
    )
    return result


def weak_null_confidence_interval(
    x: ExperimentSample,
    cfg: RandomizationTestCfg | None = None,
    grid: np.ndarray | None = None,
    num_points: int = 201,
    width: float = 5.0,
    studentize: bool = True,
) -> GridInterval:
    """Confidence set for the average treatment effect by inverting :func:`weak_null_test_pairs`.

    Args:
        x: Matched-pair experiment.
        cfg: Run configuration. In Monte Carlo mode every grid value uses the same seed. Defaults to None.
        grid: Null values to test. Defaults to None, in which case ``num_points`` values spanning the estimate
            plus/minus ``width`` standard errors are used.
        num_points: Size of the default grid. Defaults to 201.
        width: Half-width of the default grid in standard errors. Defaults to 5.

    Raises:
        ParameterError: When the default grid would be degenerate (all pair differences zero).
    """
    cfg = RandomizationTestCfg() if cfg is None else cfg
    if cfg.mode == "mc":
        cfg = dataclasses.replace(cfg, seed=resolve_seed(cfg.seed))
    if grid is None:
        members = x.pair_order()
        diffs = pair_differences(x.d, x.y, members)
        report = pair_variance(diffs)
        se = np.sqrt(report.variance / members.shape[0])
        if not se > 0.0:
            raise ParameterError("All pair differences are zero; pass an explicit grid of null values.")
        grid = np.linspace(diffs.mean() - width * se, diffs.mean() + width * se, num_points)
    return invert_over_grid(
        lambda theta0: weak_null_test_pairs(x, theta0, cfg=cfg, studentize=studentize).p_hat, grid, cfg.alpha
    )
