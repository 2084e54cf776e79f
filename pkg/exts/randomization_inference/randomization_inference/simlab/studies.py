"""Monte Carlo drivers of the calibration studies.

Replications run on independent streams spawned from the root seed, so a study table is a deterministic function
of its configuration for any number of workers.
"""

from __future__ import annotations

import dataclasses
import functools
import logging
import math
import numpy as np
import pandas as pd
import scipy.stats
from collections.abc import Sequence
from dataclasses import dataclass
from typing import TYPE_CHECKING

from ..conformal.conformal import full_conformal, split_conformal, upper_bound_exchangeable
from ..conformal.conformal_cfg import ConformalCfg
from ..conformal.predictors import LeastSquaresPredictor
from ..engine.randomization_test import run_mc
from ..errors import NullMismatchError, ParameterError, UndefinedStatisticError
from ..groups.group_kinds import FullPermutation
from ..stats.hot_hand import hot_hand_sigma2
from ..stats.statistics_cfg import HotHandDiffCfg
from ..utils.parallel import parallel_replications
from ..utils.rng import draw_seed, spawn_rngs
from .generators_cfg import BernoulliSeriesCfg

if TYPE_CHECKING:
    from .level_tests_cfg import LevelTestCfg
    from .studies_cfg import (
        ConformalCoverageCfg,
        EarningsStudyCfg,
        HotHandStudyCfg,
        ScenarioCfg,
        UnequalVariancesCfg,
    )

logger = logging.getLogger(__name__)

MAX_REDRAWS = 100
"""Redraws of a binary series on which the streak statistic is undefined."""


def rate_table_row(scenario: str, name: str, hits: np.ndarray, alpha: float, **columns) -> dict:
    """Rate and Monte Carlo standard error ``sqrt(rate (1 - rate) / R)`` of a boolean replication vector."""
    reps = hits.shape[0]
    rate = float(hits.mean())
    return {
        "scenario": scenario,
        **columns,
        "test": name,
        "reps": reps,
        "alpha": alpha,
        "count": int(hits.sum()),
        "rate": rate,
        "mc_se": math.sqrt(rate * (1.0 - rate) / reps),
    }


"""
Level studies.
"""


def _level_replication(rng: np.random.Generator, scenario: ScenarioCfg, tests: Sequence[LevelTestCfg]) -> list[bool]:
    draw = scenario.generator.func(scenario.generator, rng)
    return [bool(test.func(test, draw, scenario.alpha, rng)) for test in tests]


def run_level_study(scenario: ScenarioCfg, tests: Sequence[LevelTestCfg] | None = None) -> pd.DataFrame:
    """Rejection rates of tests on data generated under a true null hypothesis.

    Args:
        scenario: The data-generating process and replication plan.
        tests: Tests to run on every replication. Defaults to None, in which case ``scenario.tests`` are used.

    Returns:
        One row per test with the columns scenario, test, reps, alpha, count (rejections), rate (rejection rate)
        and mc_se (its Monte Carlo standard error).

    Raises:
        NullMismatchError: When the generator does not declare its null hypothesis to hold.
        ParameterError: When the replication plan or the test list is invalid.
    """
    tests = list(scenario.tests if tests is None else tests)
    scenario.check()
    if not scenario.generator.null_holds:
        raise NullMismatchError(
            f"The null hypothesis '{scenario.generator.null}' does not hold for generator"
            f" '{scenario.generator.generator_id}' with the given parameters; a level study would be mislabeled."
        )
    if not tests:
        raise ParameterError("A level study needs at least one test.")
    names = [test.name for test in tests]
    if len(set(names)) != len(names):
        raise ParameterError(f"Test names must be unique, received {names}.")
    replicate = functools.partial(_level_replication, scenario=scenario, tests=tests)
    outcomes = np.asarray(
        parallel_replications(
            replicate,
            spawn_rngs(scenario.seed, scenario.reps),
            num_workers=scenario.num_workers,
            progress=scenario.progress,
            description=scenario.name,
        ),
        dtype=bool,
    ).reshape(scenario.reps, len(tests))
    rows = [rate_table_row(scenario.name, name, outcomes[:, j], scenario.alpha) for j, name in enumerate(names)]
    for row in rows:
        logger.debug("%s/%s: rejection rate %.4f (se %.4f)", row["scenario"], row["test"], row["rate"], row["mc_se"])
    return pd.DataFrame(rows)


def level_study(cfg: ScenarioCfg) -> pd.DataFrame:
    """Level study of a single scenario with its configured tests."""
    return run_level_study(cfg)


def unequal_variances_study(cfg: UnequalVariancesCfg) -> pd.DataFrame:
    """Level study of the difference-in-means tests over the shares ``p`` of the first sample."""
    tables = []
    for p in cfg.proportions:
        scenario = dataclasses.replace(cfg, generator=dataclasses.replace(cfg.generator, p=p))
        table = run_level_study(scenario)
        table.insert(1, "p", p)
        tables.append(table)
    return pd.concat(tables, ignore_index=True)


def earnings_study(cfg: EarningsStudyCfg) -> pd.DataFrame:
    """Level study on the synthetic earnings populations for every rescaling setting and share."""
    tables = []
    for rescaled in cfg.settings:
        for p in cfg.proportions:
            generator = dataclasses.replace(cfg.generator, p=p, rescaled=rescaled)
            table = run_level_study(dataclasses.replace(cfg, generator=generator))
            table.insert(1, "p", p)
            table.insert(1, "rescaled", rescaled)
            tables.append(table)
    return pd.concat(tables, ignore_index=True)


"""
Conformal coverage.
"""


def _coverage_replication(rng: np.random.Generator, cfg: ConformalCoverageCfg) -> dict[str, tuple[bool, float]]:
    x, y = cfg.generator.func(cfg.generator, rng)
    n, m = cfg.num_calibration, cfg.num_train
    x_new, y_new = x[-1], y[-1]
    calib = slice(m, m + n)
    outcome = {}
    bound = upper_bound_exchangeable(y[calib], cfg.alpha)
    outcome["upper_bound"] = (bool(y_new <= bound.upper), math.nan)
    interval = split_conformal(x[:m], y[:m], x[calib], y[calib], x_new, cfg.alpha, LeastSquaresPredictor())
    outcome["split"] = (interval.contains(y_new), interval.width)
    if cfg.include_full:
        prediction_set = full_conformal(y[calib], x[calib], x_new, ConformalCfg(alpha=cfg.alpha))
        width = sum(hi - lo for lo, hi in prediction_set.intervals)
        outcome["full"] = (prediction_set.contains(y_new), width)
    return outcome


def conformal_coverage_study(cfg: ConformalCoverageCfg) -> pd.DataFrame:
    """Coverage of the one-sided bound, split conformal and (optionally) full conformal for the next point.

    Returns:
        One row per method with the columns scenario, test (the method), reps, alpha, count (covered), rate
        (coverage), mc_se and mean_width (NaN for the one-sided bound).
    """
    cfg.check()
    generator = dataclasses.replace(cfg.generator, num_points=cfg.num_train + cfg.num_calibration + 1)
    cfg = dataclasses.replace(cfg, generator=generator)
    outcomes = parallel_replications(
        functools.partial(_coverage_replication, cfg=cfg),
        spawn_rngs(cfg.seed, cfg.reps),
        num_workers=cfg.num_workers,
        progress=cfg.progress,
        description=cfg.name,
    )
    rows = []
    for method in outcomes[0]:
        covered = np.asarray([outcome[method][0] for outcome in outcomes], dtype=bool)
        widths = np.asarray([outcome[method][1] for outcome in outcomes], dtype=float)
        row = rate_table_row(cfg.name, method, covered, cfg.alpha, num_calibration=cfg.num_calibration)
        row["mean_width"] = float(widths.mean())
        rows.append(row)
    return pd.DataFrame(rows)


"""
Hot hand.
"""


@dataclass
class HotHandDiagnostics:
    """Randomization distributions of the streak difference over i.i.d. Bernoulli series."""

    n: int
    k: int
    q: float
    b: int
    reps: int
    seed: int
    table: pd.DataFrame
    """One row per series: q_hat, t_obs, mean, variance, sigma2_over_n, variance_ratio, ks_distance,
    num_excluded and redraws."""
    distribution: np.ndarray
    """Randomization distribution of the first series."""

    @property
    def sigma2(self) -> float:
        """Limiting variance ``sigma_k^2(q)`` at the true make probability."""
        return hot_hand_sigma2(self.q, self.k)

    @property
    def mean(self) -> float:
        """Average mean of the randomization distributions (its bias)."""
        return float(self.table["mean"].mean())

    @property
    def variance_ratio(self) -> float:
        """Average ratio of the randomization variance to ``sigma_k^2(q_hat) / n``."""
        return float(self.table["variance_ratio"].mean())

    @property
    def ks_distance(self) -> float:
        return float(self.table["ks_distance"].mean())

    def summary(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "q": self.q,
            "b": self.b,
            "reps": self.reps,
            "seed": self.seed,
            "sigma2": self.sigma2,
            "mean": self.mean,
            "variance": float(self.table["variance"].mean()),
            "sigma2_over_n": float(self.table["sigma2_over_n"].mean()),
            "variance_ratio": self.variance_ratio,
            "ks_distance": self.ks_distance,
        }

    def summary_table(self) -> pd.DataFrame:
        return pd.DataFrame([self.summary()])

    def histogram(self, bins: int = 40) -> pd.DataFrame:
        """Histogram of the first randomization distribution next to its normal approximation.

        The normal density is centered at the distribution mean with variance ``sigma_k^2(q_hat) / n``.
        """
        counts, edges = np.histogram(self.distribution, bins=bins)
        first = self.table.iloc[0]
        centers = 0.5 * (edges[:-1] + edges[1:])
        widths = np.diff(edges)
        return pd.DataFrame(
            {
                "bin_left": edges[:-1],
                "bin_right": edges[1:],
                "count": counts,
                "density": counts / (counts.sum() * widths),
                "normal_density": scipy.stats.norm.pdf(
                    centers, loc=first["mean"], scale=math.sqrt(first["sigma2_over_n"])
                ),
            }
        )

    def to_dict(self) -> dict:
        return {**self.summary(), "series": self.table.to_dict(orient="records")}


def _hot_hand_replication(
    argument: tuple[int, np.random.Generator], n: int, k: int, q: float, b: int
) -> tuple[dict, np.ndarray | None]:
    index, rng = argument
    generator = BernoulliSeriesCfg(n=n, q=q)
    statistic = HotHandDiffCfg(streak_length=k)
    for redraws in range(MAX_REDRAWS):
        sample = generator.func(generator, rng)
        try:
            result = run_mc(sample, statistic, FullPermutation(n), b=b, seed=draw_seed(rng))
        except UndefinedStatisticError:
            continue
        break
    else:
        raise UndefinedStatisticError(
            f"The streak difference with k={k} was undefined on {MAX_REDRAWS} Bernoulli({q}) series of length {n}."
        )
    values = result.values
    q_hat = float(np.mean(sample.data))
    sigma2_over_n = hot_hand_sigma2(q_hat, k) / n
    mean = float(values.mean())
    variance = float(values.var(ddof=1))
    ks_distance = float(scipy.stats.kstest(values, "norm", args=(mean, math.sqrt(sigma2_over_n))).statistic)
    row = {
        "series": index,
        "q_hat": q_hat,
        "t_obs": result.t_obs,
        "mean": mean,
        "variance": variance,
        "sigma2_over_n": sigma2_over_n,
        "variance_ratio": variance / sigma2_over_n,
        "ks_distance": ks_distance,
        "num_excluded": result.num_excluded,
        "redraws": redraws,
    }
    return row, values if index == 0 else None


def run_hot_hand_study(
    n: int,
    k: int,
    q: float,
    b: int,
    reps: int = 1,
    seed: int = 0,
    num_workers: int = 1,
    progress: bool = False,
) -> HotHandDiagnostics:
    """Compare randomization distributions of the streak difference with their normal approximation.

    For every Bernoulli(q) series the distribution of ``D_k`` over ``b - 1`` random permutations plus the identity
    is summarized by its mean (the bias), its variance relative to ``sigma_k^2(q_hat) / n`` and its
    Kolmogorov-Smirnov distance to the normal law with the same mean and that variance. Permutations on which the
    statistic is undefined are excluded; series on which it is undefined are redrawn.

    Raises:
        ParameterError: When ``n <= k``, ``q`` is outside (0, 1), ``b < 2`` or ``reps < 1``.
    """
    if n <= k:
        raise ParameterError(f"The series length must exceed the streak length, received n={n} and k={k}.")
    if reps < 1:
        raise ParameterError(f"At least one replication is required, received {reps}.")
    BernoulliSeriesCfg(n=n, q=q).check()
    outcomes = parallel_replications(
        functools.partial(_hot_hand_replication, n=n, k=k, q=q, b=b),
        list(enumerate(spawn_rngs(seed, reps))),
        num_workers=num_workers,
        progress=progress,
        description="hot_hand",
    )
    table = pd.DataFrame([row for row, _ in outcomes])
    return HotHandDiagnostics(n=n, k=k, q=q, b=b, reps=reps, seed=seed, table=table, distribution=outcomes[0][1])


def hot_hand_study(cfg: HotHandStudyCfg) -> pd.DataFrame:
    """Summary row of :func:`run_hot_hand_study` for the configured series."""
    cfg.check()
    diagnostics = run_hot_hand_study(
        cfg.generator.n,
        cfg.k,
        cfg.generator.q,
        cfg.b,
        reps=cfg.reps,
        seed=cfg.seed,
        num_workers=cfg.num_workers,
        progress=cfg.progress,
    )
    return diagnostics.summary_table()
