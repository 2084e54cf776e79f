"""Approximate randomization tests with cluster sign changes.

Under the null the vector of cluster scores is asymptotically normal with mean zero and block-diagonal covariance,
so its limit is invariant under flipping the sign of any cluster. The sign-change randomization test applied to a
statistic of the scores is then asymptotically level alpha for a fixed number of clusters.
"""

from __future__ import annotations

import dataclasses
import logging
import math
import numpy as np
import scipy.stats
from dataclasses import dataclass, field

from ..engine.inversion import GridInterval, invert_over_grid
from ..engine.randomization_test import RandomizationResult, check_alpha, run_test
from ..engine.randomization_test_cfg import RandomizationTestCfg
from ..errors import DegenerateScaleError, StructuralError
from ..groups.group_kinds import ClusterSignChange
from ..utils.rng import resolve_seed
from .art_cfg import ArtStatisticCfg, TStatCfg, WaldCfg
from .art_statistics import t_parts
from .cluster_scores import ClusterScores, cluster_scores_ols

logger = logging.getLogger(__name__)


def art_run_cfg(q: int, cfg: RandomizationTestCfg | None = None) -> RandomizationTestCfg:
    """Default run configuration: exact when all ``2^q`` sign changes fit under the cap, Monte Carlo otherwise."""
    if cfg is not None:
        return cfg
    cfg = RandomizationTestCfg()
    if 2**q > cfg.enumeration_cap:
        cfg = dataclasses.replace(cfg, mode="mc")
    return cfg


def art_statistic(scores: ClusterScores, statistic_cfg: ArtStatisticCfg) -> float:
    """Observed value of the statistic."""
    return float(statistic_cfg.evaluate(scores.s[None], scores.to_sample(), strict=False)[0])


def art_test(
    scores: ClusterScores,
    statistic_cfg: ArtStatisticCfg | None = None,
    cfg: RandomizationTestCfg | None = None,
) -> RandomizationResult:
    """Cluster sign-change randomization test of ``theta = theta0``.

    Args:
        scores: The cluster scores.
        statistic_cfg: Wald or t-statistic. Defaults to None: the t-statistic for scalar scores, Wald otherwise.
        cfg: Run configuration. Defaults to None, see :func:`art_run_cfg`.

    Raises:
        StructuralError: When the t-statistic is requested for vector scores.
    """
    if statistic_cfg is None:
        statistic_cfg = TStatCfg() if scores.d == 1 else WaldCfg()
    if isinstance(statistic_cfg, TStatCfg) and scores.d != 1:
        raise StructuralError(f"The cluster t-statistic requires scalar scores, received dimension {scores.d}.")
    cfg = art_run_cfg(scores.q, cfg)
    warnings = []
    if math.isinf(art_statistic(scores, statistic_cfg)):
        message = (
            f"The scale of the observed {statistic_cfg.describe()} statistic is degenerate with a non-zero mean;"
            " the statistic is +inf."
        )
        logger.warning(message)
        warnings.append(message)
    result = run_test(scores.to_sample(), statistic_cfg, ClusterSignChange(q=scores.q), cfg)
    result.warnings[:0] = warnings
    result.extras.update(q=scores.q, d=scores.d)
    if scores.theta0 is not None:
        result.extras["theta0"] = scores.theta0
    return result


"""
Student-t comparison test.
"""


@dataclass
class TTestDecision:
    """Decision of the cluster t-test against Student-t critical values."""

    reject: bool
    t_stat: float
    """``sqrt(q) |mean(S)| / sd(S)``."""
    critical_value: float
    """The ``1 - alpha/2`` quantile of the t-distribution with ``q - 1`` degrees of freedom."""
    df: int
    alpha: float
    warnings: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def im_ttest_valid(alpha: float, q: int) -> bool:
    """Whether the t-test is known to be asymptotically level alpha for ``q`` clusters."""
    return (alpha <= 0.083 and q >= 2) or (alpha <= 0.10 and 2 <= q <= 14)


def im_ttest(scores: ClusterScores, alpha: float) -> TTestDecision:
    """Compare the cluster t-statistic with Student-t critical values on ``q - 1`` degrees of freedom.

    The statistic is the sign-change t-statistic times ``sqrt(q)``, the usual one-sample t-statistic of the cluster
    estimates. The factor does not change the randomization test but sets the scale of the t comparison.

    Raises:
        StructuralError: When the scores are not scalar.
        DegenerateScaleError: When all scores are equal.
    """
    check_alpha(alpha)
    if scores.d != 1:
        raise StructuralError(f"The cluster t-test requires scalar scores, received dimension {scores.d}.")
    q = scores.q
    mean, spread = t_parts(scores.s[:, 0])
    if not spread > 0.0:
        raise DegenerateScaleError("The cluster scores have zero spread; the t-test is undefined.")
    warnings = []
    if not im_ttest_valid(alpha, q):
        message = (
            "The t-test is only known to control size for alpha <= 0.083 (any q >= 2) or alpha <= 0.10 with"
            f" 2 <= q <= 14; received alpha={alpha} and q={q}."
        )
        logger.warning(message)
        warnings.append(message)
    t_stat = float(math.sqrt(q) * abs(mean) / spread)
    critical_value = float(scipy.stats.t.ppf(1.0 - alpha / 2.0, q - 1))
    return TTestDecision(
        reject=t_stat > critical_value,
        t_stat=t_stat,
        critical_value=critical_value,
        df=q - 1,
        alpha=alpha,
        warnings=warnings,
    )


def art_confidence_interval(
    y: np.ndarray,
    x: np.ndarray | None,
    clusters: np.ndarray,
    coefficient: int = 0,
    grid: np.ndarray | None = None,
    cfg: RandomizationTestCfg | None = None,
    add_intercept: bool = True,
    num_points: int = 201,
    width: float = 5.0,
) -> GridInterval:
    """Confidence set for a scalar coefficient by inverting :func:`art_test` with the t-statistic.

    Args:
        y: Responses.
        x: Regressors, or None for an intercept-only model.
        clusters: Cluster label per observation.
        coefficient: Index of the coefficient in the design. Defaults to 0.
        grid: Null values to test. Defaults to None, in which case ``num_points`` values spanning the mean
            per-cluster estimate plus/minus ``width`` standard errors of that mean are used.
        cfg: Run configuration. In Monte Carlo mode every grid value uses the same seed. Defaults to None.
        add_intercept: Whether to prepend a column of ones. Defaults to True.
        num_points: Size of the default grid. Defaults to 201.
        width: Half-width of the default grid in standard errors. Defaults to 5.
    """
    base = cluster_scores_ols(y, x, clusters, coefficient=coefficient, theta0=0.0, add_intercept=add_intercept)
    cfg = art_run_cfg(base.q, cfg)
    if cfg.mode == "mc":
        cfg = dataclasses.replace(cfg, seed=resolve_seed(cfg.seed))
    if grid is None:
        estimates = base.estimates[:, 0]
        center, spread = estimates.mean(), estimates.std(ddof=1) / math.sqrt(base.q)
        spread = spread if spread > 0.0 else max(abs(center), 1.0)
        grid = np.linspace(center - width * spread, center + width * spread, num_points)

    def p_value(theta0: float) -> float:
        shifted = dataclasses.replace(
            base, s=math.sqrt(base.n) * (base.estimates - theta0), theta0=np.asarray([theta0])
        )
        return art_test(shifted, TStatCfg(), cfg).p_hat

    return invert_over_grid(p_value, grid, cfg.alpha)
