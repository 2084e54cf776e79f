"""Configuration classes of the calibration studies."""

from __future__ import annotations

import dataclasses
from dataclasses import MISSING, dataclass, field

from ..cluster_art.art_cfg import TStatCfg, WaldCfg
from ..engine.randomization_test import check_alpha
from ..errors import ParameterError
from ..groups.groups_cfg import FullPermutationCfg, SignChangeCfg
from ..stats.statistics_cfg import (
    AbsMeanCfg,
    CorrelationCfg,
    MeanDiffCfg,
    StudentizedCorrelationCfg,
    StudentizedMeanDiffCfg,
)
from .generators_cfg import (
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

MIN_REPS = 100
"""Smallest replication count of a level or coverage study."""


@dataclass(kw_only=True)
class ScenarioCfg:
    """A data-generating process, the tests run on it and the replication plan."""

    name: str = "scenario"
    """Label of the scenario in result tables."""
    generator: GeneratorCfg = MISSING
    """The data-generating process."""
    tests: list[LevelTestCfg] = field(default_factory=list)
    """Tests run on every replication."""
    reps: int = 1000
    """Number of replications R. Defaults to 1000."""
    alpha: float = 0.05
    """Nominal level. Defaults to 0.05."""
    seed: int = 0
    """Root seed. Replication streams are spawned from it. Defaults to 0."""
    num_workers: int = 1
    """Number of worker processes over replications. Defaults to 1 (sequential)."""
    progress: bool = False
    """Whether to show a progress bar. Defaults to False."""

    def check(self):
        """Check the replication plan and the generator parameters.

        Raises:
            ParameterError: When ``reps < 100``, alpha is outside (0, 1) or a generator parameter is invalid.
        """
        if self.reps < MIN_REPS:
            raise ParameterError(f"A study needs at least {MIN_REPS} replications, received {self.reps}.")
        check_alpha(self.alpha)
        self.generator.check()

    def to_dict(self) -> dict:
        payload = {
            f.name: getattr(self, f.name) for f in dataclasses.fields(self) if f.name not in ("generator", "tests")
        }
        payload["generator"] = self.generator.to_dict()
        payload["tests"] = [test.to_dict() for test in self.tests]
        return payload


def _mean_diff_tests(b: int) -> list[LevelTestCfg]:
    group = FullPermutationCfg()
    return [
        RandomizationLevelTestCfg(name="mean_diff", statistic=MeanDiffCfg(absolute=True), group=group, b=b),
        RandomizationLevelTestCfg(
            name="studentized_mean_diff", statistic=StudentizedMeanDiffCfg(absolute=True), group=group, b=b
        ),
    ]


"""
Level studies.
"""


@dataclass(kw_only=True)
class SignTestLevelCfg(ScenarioCfg):
    """Sign-change test on symmetric data: exact randomized decisions and Monte Carlo p-values with b = 100."""

    name: str = "sign_test_level"
    generator: GeneratorCfg = field(default_factory=lambda: SymmetricOneSampleCfg(n=10))
    tests: list[LevelTestCfg] = field(
        default_factory=lambda: [
            RandomizationLevelTestCfg(
                name="exact_randomized", statistic=AbsMeanCfg(), group=SignChangeCfg(), mode="exact", rule="randomized"
            ),
            RandomizationLevelTestCfg(name="mc_p_value", statistic=AbsMeanCfg(), group=SignChangeCfg(), b=100),
        ]
    )
    reps: int = 10000


@dataclass(kw_only=True)
class UnequalVariancesCfg(ScenarioCfg):
    """Unstudentized and studentized difference in means for mean-zero populations with unequal variances.

    By default the second population has three times the variance of the first. The first sample makes up the
    share ``p`` of the pooled sample.
    """

    name: str = "unequal_variances"
    generator: GeneratorCfg = field(
        default_factory=lambda: TwoPopulationCfg(
            num_total=100, variance_x=1.0, variance_y=3.0, distribution="lognormal"
        )
    )
    tests: list[LevelTestCfg] = field(default_factory=lambda: _mean_diff_tests(2000))
    reps: int = 2000
    proportions: tuple[float, ...] = (0.2, 0.5, 0.8)
    """Shares p of the first sample."""


@dataclass(kw_only=True)
class EarningsStudyCfg(ScenarioCfg):
    """Difference-in-means tests on the synthetic earnings populations, with and without rescaling."""

    name: str = "earnings"
    generator: GeneratorCfg = field(default_factory=EarningsPopulationCfg)
    tests: list[LevelTestCfg] = field(default_factory=lambda: _mean_diff_tests(2000))
    reps: int = 2000
    proportions: tuple[float, ...] = (0.1, 0.3, 0.5, 0.7, 0.9)
    """Shares p of the first group."""
    settings: tuple[bool, ...] = (False, True)
    """Values of the ``rescaled`` flag."""


@dataclass(kw_only=True)
class CorrelationStudyCfg(ScenarioCfg):
    """Permutation tests of zero correlation when ``Y = Z X``."""

    name: str = "correlation"
    generator: GeneratorCfg = field(default_factory=lambda: ProductDependenceCfg(n=200))
    tests: list[LevelTestCfg] = field(
        default_factory=lambda: [
            RandomizationLevelTestCfg(
                name="correlation", statistic=CorrelationCfg(absolute=True), group=FullPermutationCfg()
            ),
            RandomizationLevelTestCfg(
                name="studentized_correlation",
                statistic=StudentizedCorrelationCfg(absolute=True),
                group=FullPermutationCfg(),
            ),
        ]
    )
    reps: int = 2000


@dataclass(kw_only=True)
class WeakNullPairsCfg(ScenarioCfg):
    """Matched-pair tests of a zero average effect with heterogeneous effects."""

    name: str = "weak_null_pairs"
    generator: GeneratorCfg = field(default_factory=lambda: HeterogeneousPairsCfg(n=200))
    tests: list[LevelTestCfg] = field(
        default_factory=lambda: [
            WeakPairsLevelTestCfg(name="pair_difference", studentize=False),
            WeakPairsLevelTestCfg(name="studentized_pair_difference", studentize=True),
        ]
    )
    reps: int = 2000


@dataclass(kw_only=True)
class ClusterArtStudyCfg(ScenarioCfg):
    """Cluster sign-change tests and the Student-t comparison on heteroskedastic cluster scores."""

    name: str = "cluster_art"
    generator: GeneratorCfg = field(default_factory=lambda: HeteroskedasticClusterScoresCfg(q=8))
    tests: list[LevelTestCfg] = field(
        default_factory=lambda: [
            ArtLevelTestCfg(name="art_tstat", statistic=TStatCfg()),
            ArtLevelTestCfg(name="art_wald", statistic=WaldCfg()),
            TTestLevelTestCfg(name="t_comparison"),
        ]
    )
    reps: int = 10000


"""
Coverage and distribution studies.
"""


@dataclass(kw_only=True)
class ConformalCoverageCfg(ScenarioCfg):
    """Coverage of conformal bounds and intervals for the next of ``num_calibration + 1`` exchangeable points."""

    name: str = "conformal_coverage"
    generator: GeneratorCfg = field(default_factory=LinearModelCfg)
    reps: int = 10000
    num_calibration: int = 19
    """Number of calibration points n. Defaults to 19, for which ``(n + 1)(1 - 0.05)`` is an integer."""
    num_train: int = 50
    """Number of training points of split conformal prediction. Defaults to 50."""
    include_full: bool = False
    """Whether to include full conformal prediction with least squares, which refits on every grid point."""

    def check(self):
        super().check()
        if self.num_calibration < 1 or self.num_train < 2:
            raise ParameterError(
                f"Conformal coverage needs at least one calibration and two training points, received"
                f" {self.num_calibration} and {self.num_train}."
            )


@dataclass(kw_only=True)
class HotHandStudyCfg(ScenarioCfg):
    """Randomization distribution of the streak difference for i.i.d. Bernoulli series."""

    name: str = "hot_hand"
    generator: GeneratorCfg = field(default_factory=lambda: BernoulliSeriesCfg(n=100, q=0.5))
    reps: int = 1
    k: int = 3
    """Streak length. Defaults to 3."""
    b: int = 10000
    """Permutations per series, the identity included. Defaults to 10000."""
    bins: int = 40
    """Number of histogram bins of the emitted plot data. Defaults to 40."""

    def check(self):
        if self.reps < 1:
            raise ParameterError(f"At least one replication is required, received {self.reps}.")
        self.generator.check()
