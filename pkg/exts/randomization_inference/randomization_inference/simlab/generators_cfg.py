"""Configuration classes of the synthetic data-generating processes.

Every configuration points at a generator ``func(cfg, rng)`` and declares whether the null hypothesis studied with
it holds, together with the true parameter values for oracle comparisons.
"""

from __future__ import annotations

import dataclasses
import math
import numpy as np
from collections.abc import Callable
from dataclasses import MISSING, dataclass
from typing import Any, ClassVar, Literal

from ..errors import ParameterError
from . import generators


@dataclass(kw_only=True)
class GeneratorCfg:
    """Base configuration of a data-generating process."""

    generator_id: ClassVar[str] = "generator"
    null: ClassVar[str] = ""
    """Description of the null hypothesis studied with the generator."""

    func: Callable[..., Any] = MISSING
    """Function ``func(cfg, rng)`` drawing one data set."""

    @property
    def null_holds(self) -> bool:
        """Whether the null hypothesis is true under this configuration."""
        raise NotImplementedError

    def truth(self) -> dict:
        """True parameter values."""
        return {}

    def check(self):
        """Check that the parameters lie in the generator's domain.

        Raises:
            ParameterError: When a parameter is out of range.
        """

    def to_dict(self) -> dict:
        payload = {f.name: getattr(self, f.name) for f in dataclasses.fields(self) if f.name != "func"}
        return {"generator_id": self.generator_id, **payload}


def _check_positive(name: str, value: float):
    if not value > 0.0:
        raise ParameterError(f"'{name}' must be positive, received {value}.")


"""
Two-sample and one-sample scenarios.
"""


@dataclass(kw_only=True)
class TwoPopulationCfg(GeneratorCfg):
    """Two independent samples with mean-zero populations of possibly different variances.

    The first sample holds ``round(p * num_total)`` observations with variance ``variance_x``, the second the
    rest with variance ``variance_y``.
    """

    generator_id: ClassVar[str] = "two_population"
    null: ClassVar[str] = "equal means"

    func: Callable[..., Any] = generators.two_population
    num_total: int = 100
    """Total sample size N. Defaults to 100."""
    p: float = 0.5
    """Share of the first sample. Defaults to 0.5."""
    variance_x: float = 1.0
    """Population variance of the first sample. Defaults to 1."""
    variance_y: float = 1.0
    """Population variance of the second sample. Defaults to 1."""
    distribution: Literal["normal", "lognormal"] = "normal"
    """Shape of both populations before centering and scaling. Defaults to "normal"."""
    shape: float = 0.5
    """Log-scale standard deviation of the lognormal shape. Defaults to 0.5."""
    mean_difference: float = 0.0
    """Mean of the first population minus the mean of the second. Defaults to 0."""

    @property
    def num_x(self) -> int:
        return int(math.floor(self.p * self.num_total + 0.5))

    @property
    def null_holds(self) -> bool:
        return self.mean_difference == 0.0

    def variances(self) -> tuple[float, float]:
        return self.variance_x, self.variance_y

    def truth(self) -> dict:
        vx, vy = self.variances()
        p = self.num_x / self.num_total
        return {
            "mean_difference": self.mean_difference,
            "variance_x": vx,
            "variance_y": vy,
            "equal_distributions": self.mean_difference == 0.0 and vx == vy,
            # variances of sqrt(N) (mean_x - mean_y): true and under random relabeling
            "asymptotic_variance": vx / p + vy / (1.0 - p),
            "permutation_variance": (p * vx + (1.0 - p) * vy) / (p * (1.0 - p)),
        }

    def check(self):
        if not 0.0 < self.p < 1.0:
            raise ParameterError(f"The sample share p must lie in (0, 1), received {self.p}.")
        if self.num_x < 2 or self.num_total - self.num_x < 2:
            raise ParameterError(
                f"Both samples need at least two observations, received {self.num_x} and"
                f" {self.num_total - self.num_x}."
            )
        for name, value in zip(("variance_x", "variance_y"), self.variances()):
            _check_positive(name, value)
        _check_positive("shape", self.shape)


EARNINGS_VARIANCES = (0.531, 0.392)
"""Population variances of the centered log earnings of the first (men) and second (women) group."""


@dataclass(kw_only=True)
class EarningsPopulationCfg(TwoPopulationCfg):
    """Synthetic stand-in for centered log earnings of two groups.

    Both populations are centered lognormal draws with the reported variances. With ``rescaled`` the second
    population is multiplied by ``1/sqrt(3)``, dividing its variance by three.
    """

    generator_id: ClassVar[str] = "earnings"

    variance_x: float = EARNINGS_VARIANCES[0]
    variance_y: float = EARNINGS_VARIANCES[1]
    distribution: Literal["normal", "lognormal"] = "lognormal"
    rescaled: bool = False
    """Whether to rescale the second population by ``1/sqrt(3)``. Defaults to False."""

    def variances(self) -> tuple[float, float]:
        return self.variance_x, (self.variance_y / 3.0 if self.rescaled else self.variance_y)


@dataclass(kw_only=True)
class SymmetricOneSampleCfg(GeneratorCfg):
    """I.i.d. draws from a distribution symmetric about ``center``."""

    generator_id: ClassVar[str] = "symmetric_one_sample"
    null: ClassVar[str] = "distribution symmetric about zero"

    func: Callable[..., Any] = generators.symmetric_one_sample
    n: int = 10
    """Sample size. Defaults to 10."""
    distribution: Literal["normal", "laplace", "t"] = "normal"
    """Distribution family. Defaults to "normal"."""
    df: float = 3.0
    """Degrees of freedom of the t family. Defaults to 3."""
    center: float = 0.0
    """Center of symmetry. Defaults to 0."""

    @property
    def null_holds(self) -> bool:
        return self.center == 0.0

    def truth(self) -> dict:
        return {"center": self.center}

    def check(self):
        if self.n < 1:
            raise ParameterError(f"The sample size must be positive, received {self.n}.")
        _check_positive("df", self.df)


"""
Association.
"""


@dataclass(kw_only=True)
class ProductDependenceCfg(GeneratorCfg):
    """Pairs ``(X, Y)`` with ``X`` standard normal and ``Y = Z X`` for an independent Rademacher sign ``Z``.

    ``X`` and ``Y`` are uncorrelated but dependent, so the variance of ``sqrt(n)`` times the sample correlation is
    ``E[X^4] = 3`` while random relabeling implies 1. With ``dependent=False``, ``Y`` is an independent standard
    normal draw.
    """

    generator_id: ClassVar[str] = "product_dependence"
    null: ClassVar[str] = "zero correlation"

    func: Callable[..., Any] = generators.product_dependence
    n: int = 200
    """Number of pairs. Defaults to 200."""
    dependent: bool = True
    """Whether ``Y = Z X``. Defaults to True."""

    @property
    def null_holds(self) -> bool:
        return True

    def truth(self) -> dict:
        return {
            "correlation": 0.0,
            "independent": not self.dependent,
            "asymptotic_variance": 3.0 if self.dependent else 1.0,
        }

    def check(self):
        if self.n < 3:
            raise ParameterError(f"At least three pairs are required, received {self.n}.")


"""
Randomized experiments.
"""


@dataclass(kw_only=True)
class HeterogeneousPairsCfg(GeneratorCfg):
    """Matched-pair experiment with covariate-dependent treatment effects.

    Covariates are uniform on (0, 1), control outcomes standard normal and the effect of a unit with covariate
    ``z`` is ``ate + effect_scale * (2 z - 1)``. Units are paired on adjacent covariates and one unit per pair is
    treated at random. The weak null (zero average effect) holds for ``ate = 0`` while the strong null fails.
    """

    generator_id: ClassVar[str] = "heterogeneous_pairs"
    null: ClassVar[str] = "zero average treatment effect"

    func: Callable[..., Any] = generators.heterogeneous_pairs
    n: int = 200
    """Number of units. Must be even. Defaults to 200."""
    ate: float = 0.0
    """Average treatment effect. Defaults to 0."""
    effect_scale: float = 3.0
    """Slope of the effect in ``2 z - 1``. Defaults to 3."""

    @property
    def null_holds(self) -> bool:
        return self.ate == 0.0

    def truth(self) -> dict:
        spread = self.effect_scale**2 / 3.0
        return {
            "ate": self.ate,
            "strong_null": self.ate == 0.0 and self.effect_scale == 0.0,
            # variances of sqrt(k) times the mean pair difference: true and under within-pair swaps
            "variance": 2.0 + 0.5 * spread,
            "tau2": 2.0 + self.ate**2 + spread,
        }

    def check(self):
        if self.n < 4 or self.n % 2:
            raise ParameterError(f"A matched-pair experiment needs an even number of units >= 4, received {self.n}.")


"""
Clusters.
"""


@dataclass(kw_only=True)
class HeteroskedasticClusterScoresCfg(GeneratorCfg):
    """Independent normal cluster scores with mean ``mean`` and standard deviations growing geometrically."""

    generator_id: ClassVar[str] = "heteroskedastic_cluster_scores"
    null: ClassVar[str] = "zero mean of every cluster score"

    func: Callable[..., Any] = generators.heteroskedastic_cluster_scores
    q: int = 8
    """Number of clusters. Defaults to 8."""
    scale_ratio: float = 10.0
    """Largest over smallest standard deviation. Defaults to 10 (1 means homoskedastic)."""
    mean: float = 0.0
    """Common mean of the scores. Defaults to 0."""

    def scales(self) -> np.ndarray:
        return np.geomspace(1.0, self.scale_ratio, self.q)

    @property
    def null_holds(self) -> bool:
        return self.mean == 0.0

    def truth(self) -> dict:
        return {"mean": self.mean, "scales": self.scales().tolist()}

    def check(self):
        if self.q < 2:
            raise ParameterError(f"At least two clusters are required, received q={self.q}.")
        if self.scale_ratio < 1.0:
            raise ParameterError(f"The scale ratio must be at least 1, received {self.scale_ratio}.")


"""
Binary series.
"""


@dataclass(kw_only=True)
class BernoulliSeriesCfg(GeneratorCfg):
    """I.i.d. Bernoulli(q) shot outcomes."""

    generator_id: ClassVar[str] = "bernoulli_series"
    null: ClassVar[str] = "i.i.d. outcomes (no hot hand)"

    func: Callable[..., Any] = generators.bernoulli_series
    n: int = 100
    """Series length. Defaults to 100."""
    q: float = 0.5
    """Make probability. Defaults to 0.5."""

    @property
    def null_holds(self) -> bool:
        return True

    def truth(self) -> dict:
        return {"q": self.q}

    def check(self):
        if not 0.0 < self.q < 1.0:
            raise ParameterError(f"The make probability must lie in (0, 1), received {self.q}.")
        if self.n < 2:
            raise ParameterError(f"The series needs at least two outcomes, received {self.n}.")


"""
Prediction.
"""


@dataclass(kw_only=True)
class LinearModelCfg(GeneratorCfg):
    """I.i.d. points ``Y = intercept + slope X + noise`` with ``X`` uniform on (0, 1)."""

    generator_id: ClassVar[str] = "linear_model"
    null: ClassVar[str] = "exchangeable points"

    func: Callable[..., Any] = generators.linear_model
    num_points: int = 20
    """Number of points per draw. Defaults to 20."""
    intercept: float = 1.0
    slope: float = 2.0
    noise: Literal["normal", "t"] = "normal"
    """Noise distribution. Defaults to "normal"."""
    df: float = 3.0
    """Degrees of freedom of t noise. Defaults to 3."""

    @property
    def null_holds(self) -> bool:
        return True

    def truth(self) -> dict:
        return {"intercept": self.intercept, "slope": self.slope}

    def check(self):
        if self.num_points < 2:
            raise ParameterError(f"At least two points are required, received {self.num_points}.")
        _check_positive("df", self.df)


GENERATOR_CFGS: dict[str, type[GeneratorCfg]] = {
    cfg.generator_id: cfg
    for cfg in (
        TwoPopulationCfg,
        EarningsPopulationCfg,
        SymmetricOneSampleCfg,
        ProductDependenceCfg,
        HeterogeneousPairsCfg,
        HeteroskedasticClusterScoresCfg,
        BernoulliSeriesCfg,
        LinearModelCfg,
    )
}
