"""Tests of the generators, the calibration studies and the study registry."""

import numpy as np
import pandas as pd
import pytest

from randomization_inference.errors import NullMismatchError, ParameterError
from randomization_inference.groups import SignChangeCfg
from randomization_inference.simlab import (
    RandomizationLevelTestCfg,
    ScenarioCfg,
    SymmetricOneSampleCfg,
    TwoPopulationCfg,
    make_cfg,
    register,
    registry,
    run_hot_hand_study,
    run_level_study,
    run_study,
)
from randomization_inference.stats import AbsMeanCfg


def _sign_scenario(**overrides):
    test = RandomizationLevelTestCfg(
        name="sign", statistic=AbsMeanCfg(), group=SignChangeCfg(), mode="exact", rule="randomized"
    )
    fields = dict(name="sign", generator=SymmetricOneSampleCfg(n=8), tests=[test], reps=200, seed=5)
    fields.update(overrides)
    return ScenarioCfg(**fields)


class TestGenerators:
    def test_two_population_sizes(self):
        cfg = TwoPopulationCfg(num_total=10, p=0.3)
        sample = cfg.func(cfg, np.random.default_rng(0))
        assert sample.n == 10
        assert int(sample.fixed.sum()) == 3

    def test_two_population_variances(self):
        truth = TwoPopulationCfg(p=0.2, variance_x=1.0, variance_y=3.0).truth()
        assert truth["asymptotic_variance"] == pytest.approx(8.75)
        assert truth["permutation_variance"] == pytest.approx(16.25)
        assert not truth["equal_distributions"]

    def test_invalid_share(self):
        with pytest.raises(ParameterError, match=r"must lie in \(0, 1\)"):
            TwoPopulationCfg(p=1.0).check()

    def test_shifted_generator_breaks_the_null(self):
        assert TwoPopulationCfg().null_holds
        assert not TwoPopulationCfg(mean_difference=1.0).null_holds


class TestLevelStudy:
    def test_table_columns(self):
        table = run_level_study(_sign_scenario())
        assert list(table.columns) == ["scenario", "test", "reps", "alpha", "count", "rate", "mc_se"]
        assert table.loc[0, "reps"] == 200

    def test_deterministic_given_seed(self):
        pd.testing.assert_frame_equal(run_level_study(_sign_scenario()), run_level_study(_sign_scenario()))

    @pytest.mark.slow
    def test_workers_do_not_change_the_table(self):
        pd.testing.assert_frame_equal(
            run_level_study(_sign_scenario()), run_level_study(_sign_scenario(num_workers=2))
        )

    def test_null_mismatch(self):
        scenario = _sign_scenario(generator=SymmetricOneSampleCfg(n=8, center=1.0))
        with pytest.raises(NullMismatchError, match="does not hold"):
            run_level_study(scenario)

    def test_minimum_replications(self):
        with pytest.raises(ParameterError, match="at least 100 replications"):
            run_level_study(_sign_scenario(reps=99))

    def test_unique_test_names(self):
        scenario = _sign_scenario()
        with pytest.raises(ParameterError, match="unique"):
            run_level_study(scenario, tests=scenario.tests * 2)

    @pytest.mark.slow
    def test_randomized_sign_test_is_exact(self):
        table = run_level_study(_sign_scenario(reps=4000, seed=11))
        assert table.loc[0, "rate"] == pytest.approx(0.05, abs=4 * np.sqrt(0.05 * 0.95 / 4000))


class TestRegistry:
    def test_studies_are_registered(self):
        assert {"sign_test_level", "unequal_variances", "earnings", "hot_hand", "conformal_coverage"} <= set(registry)

    @pytest.mark.parametrize("study_id", sorted(registry))
    def test_default_cfgs(self, study_id):
        cfg = make_cfg(study_id)
        assert cfg.to_dict()["name"] == cfg.name
        assert callable(registry[study_id].load())

    def test_overrides_skip_none(self):
        cfg = make_cfg("sign_test_level", reps=500, seed=None)
        assert cfg.reps == 500
        assert cfg.seed == 0

    def test_unknown_study(self):
        with pytest.raises(ParameterError, match="Unknown study"):
            make_cfg("no_such_study")

    def test_duplicate_registration(self):
        with pytest.raises(ParameterError, match="already registered"):
            register(id="hot_hand", entry_point="x:y", cfg_entry_point=ScenarioCfg)

    def test_conformal_coverage(self):
        table = run_study("conformal_coverage", reps=1000, seed=2)
        rates = table.set_index("test")["rate"]
        # n = 19 calibration points make the one-sided coverage exactly 0.95
        assert rates["upper_bound"] == pytest.approx(0.95, abs=0.025)
        assert rates["split"] == pytest.approx(0.95, abs=0.025)

    @pytest.mark.slow
    def test_unequal_variances(self):
        table = run_study("unequal_variances", reps=1000, seed=1, proportions=(0.8,))
        rates = table.set_index("test")["rate"]
        # the small sample carries the large variance, so relabeling understates the spread
        assert rates["mean_diff"] > 0.08
        assert 0.025 <= rates["studentized_mean_diff"] <= 0.08


class TestHotHand:
    def test_variance_matches_normal_approximation(self):
        diagnostics = run_hot_hand_study(n=100, k=1, q=0.5, b=2000, reps=4, seed=3)
        assert diagnostics.variance_ratio == pytest.approx(1.0, rel=0.25)
        assert abs(diagnostics.mean) < 0.05
        assert diagnostics.sigma2 == pytest.approx(1.0)
        assert diagnostics.table.shape[0] == 4

    def test_histogram(self):
        diagnostics = run_hot_hand_study(n=50, k=1, q=0.5, b=500, seed=4)
        histogram = diagnostics.histogram(bins=10)
        assert list(histogram.columns) == ["bin_left", "bin_right", "count", "density", "normal_density"]
        assert histogram["count"].sum() == diagnostics.distribution.shape[0]

    def test_deterministic_given_seed(self):
        first = run_hot_hand_study(n=40, k=2, q=0.5, b=200, reps=2, seed=8)
        second = run_hot_hand_study(n=40, k=2, q=0.5, b=200, reps=2, seed=8)
        pd.testing.assert_frame_equal(first.table, second.table)

    def test_series_longer_than_streak(self):
        with pytest.raises(ParameterError, match="must exceed the streak length"):
            run_hot_hand_study(n=3, k=3, q=0.5, b=100)

    def test_registered_study(self):
        table = run_study("hot_hand", b=500, seed=6)
        assert table.shape[0] == 1
        assert {"variance_ratio", "ks_distance", "sigma2"} <= set(table.columns)
