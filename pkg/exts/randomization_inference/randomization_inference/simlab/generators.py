"""Synthetic data-generating processes of the calibration studies."""

from __future__ import annotations

import numpy as np
import scipy.stats
from typing import TYPE_CHECKING

from ..cluster_art.cluster_scores import ClusterScores
from ..errors import ParameterError
from ..experiments.assignment import draw_assignments, make_design
from ..experiments.assignment_cfg import MatchedPairsCfg
from ..experiments.experiment_sample import ExperimentSample
from ..sample import Sample

if TYPE_CHECKING:
    from . import generators_cfg


def centered_draws(
    rng: np.random.Generator, size: int, variance: float, distribution: str = "normal", shape: float = 0.5
) -> np.ndarray:
    """Mean-zero draws with the given variance.

    The lognormal family is ``exp(shape * N(0, 1))`` centered and rescaled with its exact moments.
    """
    if distribution == "normal":
        return rng.normal(0.0, np.sqrt(variance), size)
    if distribution == "lognormal":
        mean, var = scipy.stats.lognorm.stats(shape, moments="mv")
        return (rng.lognormal(0.0, shape, size) - mean) * np.sqrt(variance / var)
    raise ParameterError(f"Unknown distribution '{distribution}'. Expected 'normal' or 'lognormal'.")


def two_population(cfg: generators_cfg.TwoPopulationCfg, rng: np.random.Generator) -> Sample:
    """Pooled two-sample layout, label 1 for the first sample."""
    vx, vy = cfg.variances()
    x = centered_draws(rng, cfg.num_x, vx, cfg.distribution, cfg.shape) + cfg.mean_difference
    y = centered_draws(rng, cfg.num_total - cfg.num_x, vy, cfg.distribution, cfg.shape)
    return Sample.two_sample(x, y)


def symmetric_one_sample(cfg: generators_cfg.SymmetricOneSampleCfg, rng: np.random.Generator) -> Sample:
    if cfg.distribution == "normal":
        x = rng.standard_normal(cfg.n)
    elif cfg.distribution == "laplace":
        x = rng.laplace(0.0, 1.0, cfg.n)
    elif cfg.distribution == "t":
        x = rng.standard_t(cfg.df, cfg.n)
    else:
        raise ParameterError(f"Unknown distribution '{cfg.distribution}'. Expected 'normal', 'laplace' or 't'.")
    return Sample.one_sample(x + cfg.center)


def product_dependence(cfg: generators_cfg.ProductDependenceCfg, rng: np.random.Generator) -> Sample:
    """Bivariate layout with permutations acting on ``Y``."""
    x = rng.standard_normal(cfg.n)
    if cfg.dependent:
        signs = 2.0 * rng.integers(0, 2, cfg.n) - 1.0
        y = signs * x
    else:
        y = rng.standard_normal(cfg.n)
    return Sample.bivariate(x, y)


def heterogeneous_pairs(cfg: generators_cfg.HeterogeneousPairsCfg, rng: np.random.Generator) -> ExperimentSample:
    z = rng.random(cfg.n)
    scheme = MatchedPairsCfg()
    design = make_design(scheme, z)
    d = draw_assignments(scheme, design, rng, 1)[0]
    y0 = rng.standard_normal(cfg.n)
    effect = cfg.ate + cfg.effect_scale * (2.0 * z - 1.0)
    return ExperimentSample(y=y0 + d * effect, d=d, z=z, pairs=design.pairs)


def heteroskedastic_cluster_scores(
    cfg: generators_cfg.HeteroskedasticClusterScoresCfg, rng: np.random.Generator
) -> ClusterScores:
    s = rng.normal(cfg.mean, cfg.scales())
    return ClusterScores(s=s, theta0=np.zeros(1))


def bernoulli_series(cfg: generators_cfg.BernoulliSeriesCfg, rng: np.random.Generator) -> Sample:
    return Sample(data=(rng.random(cfg.n) < cfg.q).astype(np.int8))


def linear_model(cfg: generators_cfg.LinearModelCfg, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Covariates and responses, each of shape (num_points,)."""
    x = rng.random(cfg.num_points)
    noise = rng.standard_normal(cfg.num_points) if cfg.noise == "normal" else rng.standard_t(cfg.df, cfg.num_points)
    return x, cfg.intercept + cfg.slope * x + noise
