"""Tests of the general randomization-test construction."""

import numpy as np
import pytest

from randomization_inference.engine import (
    RandomizationTestCfg,
    critical_index,
    decide,
    invert_over_grid,
    run_exact,
    run_mc,
    run_on_transformed,
    run_test,
    summarize,
)
from randomization_inference.errors import EnumerationCapError, ParameterError, UndefinedStatisticError
from randomization_inference.groups import FullPermutation, SignChange
from randomization_inference.sample import Sample
from randomization_inference.stats import AbsMeanCfg, HotHandCfg, MatchCountCfg, MeanDiffCfg


class TestSummarize:
    @pytest.mark.parametrize("num_elements, alpha, expected", [(70, 0.05, 67), (20, 0.05, 19), (100, 0.29, 71)])
    def test_critical_index(self, num_elements, alpha, expected):
        assert critical_index(num_elements, alpha) == expected

    def test_tie_split(self):
        values = np.array([1.0] * 10 + [2.0] * 10)
        result = summarize(2.0, values, 0.25, "exact")
        assert result.k == 15
        assert result.r_hat == 2.0
        assert (result.m_plus, result.m_zero) == (0, 10)
        assert result.a == pytest.approx(0.5)
        assert result.phi == pytest.approx(0.5)
        assert result.p_hat == pytest.approx(0.5)
        assert not result.exceeds_critical

    @pytest.mark.parametrize("alpha", [0.01, 0.05, 0.1, 0.37])
    def test_exact_size_identity(self, alpha):
        rng = np.random.default_rng(11)
        values = np.round(rng.normal(size=64), 1)
        result = summarize(values[0], values, alpha, "exact")
        assert result.m_plus + result.a * result.m_zero == pytest.approx(values.shape[0] * alpha)

    def test_phi_cases(self):
        values = np.arange(1.0, 21.0)
        assert summarize(20.0, values, 0.05, "exact").phi == 1.0
        assert summarize(1.0, values, 0.05, "exact").phi == 0.0
        # T(k) = 19 with M+ = 1 leaves no mass for the tie
        assert summarize(19.0, values, 0.05, "exact").phi == 0.0

    def test_near_ties_are_tied(self):
        values = np.array([0.1 + 0.2, 0.3, 0.0, 0.0])
        result = summarize(0.3, values, 0.25, "exact")
        assert result.m_zero == 2

    def test_p_value_decreases_with_t_obs(self):
        values = np.round(np.random.default_rng(5).normal(size=50), 1)
        p_values = [summarize(t, values, 0.05, "exact").p_hat for t in np.linspace(-5.0, 5.0, 61)]
        assert all(later <= earlier for earlier, later in zip(p_values, p_values[1:]))
        assert p_values[0] == 1.0

    @pytest.mark.parametrize("alpha", [0.0, 1.0, -0.1, 1.5])
    def test_invalid_alpha(self, alpha):
        with pytest.raises(ParameterError, match="alpha must lie in"):
            summarize(0.0, np.zeros(3), alpha, "exact")

    def test_nan_values_raise(self):
        with pytest.raises(UndefinedStatisticError, match="NaN"):
            summarize(0.0, np.array([0.0, np.nan]), 0.05, "exact")


class TestExact:
    def test_fisher_tea_tasting(self):
        truth = np.array([1, 1, 1, 1, 0, 0, 0, 0])
        sample = Sample(data=truth.copy(), fixed=truth)
        result = run_exact(sample, MatchCountCfg(), FullPermutation(8), alpha=0.05)
        assert result.t_obs == 8.0
        assert result.num_elements == 40320
        assert result.p_hat == pytest.approx(1.0 / 70.0)
        assert result.exceeds_critical

    def test_sign_test_three_points(self):
        result = run_exact(Sample.one_sample([1.0, 2.0, 3.0]), AbsMeanCfg(), SignChange(3), alpha=0.05)
        assert result.num_elements == 8
        assert result.p_hat == pytest.approx(0.25)
        assert result.t_obs == pytest.approx(2.0)
        assert result.seed is None

    def test_cap(self):
        cfg = RandomizationTestCfg(enumeration_cap=100)
        with pytest.raises(EnumerationCapError, match="Monte Carlo"):
            run_exact(Sample.one_sample(np.arange(1.0, 11.0)), AbsMeanCfg(), SignChange(10), cfg=cfg)

    def test_mean_diff_two_sample(self):
        sample = Sample.two_sample([5.0, 6.0, 7.0], [1.0, 2.0, 3.0])
        result = run_exact(sample, MeanDiffCfg(), FullPermutation(6), alpha=0.1)
        # only the 3! * 3! arrangements keeping the largest values in x reach the observed difference
        assert result.p_hat == pytest.approx(36.0 / 720.0)


class TestMonteCarlo:
    def test_deterministic_given_seed(self):
        sample = Sample.one_sample(np.random.default_rng(0).normal(size=25))
        first = run_mc(sample, AbsMeanCfg(), SignChange(25), b=500, seed=123)
        second = run_mc(sample, AbsMeanCfg(), SignChange(25), b=500, seed=123)
        np.testing.assert_array_equal(first.values, second.values)
        assert first.seed == 123
        assert first.bit_generator == "PCG64"
        assert first.num_elements == 500

    def test_fresh_seed_is_recorded(self):
        sample = Sample.one_sample([1.0, -0.5, 2.0, 0.3])
        result = run_mc(sample, AbsMeanCfg(), SignChange(4), b=10)
        assert isinstance(result.seed, int)
        rerun = run_mc(sample, AbsMeanCfg(), SignChange(4), b=10, seed=result.seed)
        np.testing.assert_array_equal(result.values, rerun.values)

    def test_identity_is_included(self):
        sample = Sample.one_sample([3.0, 4.0, 5.0])
        result = run_mc(sample, AbsMeanCfg(), SignChange(3), b=2, seed=1)
        assert result.t_obs in result.values

    def test_b_too_small(self):
        with pytest.raises(ParameterError, match="b >= 2"):
            run_mc(Sample.one_sample([1.0, 2.0]), AbsMeanCfg(), SignChange(2), b=1, seed=0)

    def test_workers_do_not_change_values(self):
        sample = Sample.one_sample(np.random.default_rng(2).normal(size=30))
        sequential = RandomizationTestCfg(mode="mc", num_samples=999, seed=9, chunk_size=128)
        parallel = RandomizationTestCfg(mode="mc", num_samples=999, seed=9, chunk_size=128, num_workers=2)
        a = run_test(sample, AbsMeanCfg(), SignChange(30), sequential)
        b = run_test(sample, AbsMeanCfg(), SignChange(30), parallel)
        np.testing.assert_array_equal(a.values, b.values)
        assert a.p_hat == b.p_hat

    def test_run_on_transformed(self):
        sample = Sample.one_sample([1.0, 2.0, 3.0])
        transformed = np.array([[1.0, 2.0, 3.0], [-1.0, -2.0, -3.0], [1.0, -2.0, 3.0]])
        result = run_on_transformed(sample, AbsMeanCfg(), transformed, RandomizationTestCfg(alpha=0.5))
        assert result.num_elements == 3
        assert result.p_hat == pytest.approx(2.0 / 3.0)

    def test_unknown_mode(self):
        cfg = RandomizationTestCfg(mode="bootstrap")  # type: ignore[arg-type]
        with pytest.raises(ParameterError, match="Unknown mode"):
            run_test(Sample.one_sample([1.0]), AbsMeanCfg(), SignChange(1), cfg)


class TestUndefinedPolicy:
    series = np.array([1, 1, 0, 0, 0, 0])

    def test_exclude(self):
        result = run_exact(Sample.one_sample(self.series), HotHandCfg(streak_length=2), FullPermutation(6))
        assert result.num_excluded > 0
        assert result.num_elements + result.num_excluded == 720
        assert any("Excluded" in w for w in result.warnings)

    def test_raise(self):
        statistic = HotHandCfg(streak_length=2, undefined_policy="raise")
        with pytest.raises(UndefinedStatisticError, match="undefined for"):
            run_exact(Sample.one_sample(self.series), statistic, FullPermutation(6))


class TestDecide:
    def test_nonrandomized(self):
        result = summarize(20.0, np.arange(1.0, 21.0), 0.05, "exact")
        assert decide(result).reject

    def test_randomized_needs_rng(self):
        result = summarize(2.0, np.array([1.0] * 10 + [2.0] * 10), 0.25, "exact")
        with pytest.raises(ParameterError, match="random generator"):
            decide(result, randomized=True)

    def test_randomized_rate(self):
        result = summarize(2.0, np.array([1.0] * 10 + [2.0] * 10), 0.25, "exact")
        rng = np.random.default_rng(4)
        rejections = [decide(result, randomized=True, rng=rng).reject for _ in range(4000)]
        assert np.mean(rejections) == pytest.approx(0.5, abs=0.03)


class TestInversion:
    def test_interval_around_accepted_values(self):
        grid = np.linspace(-3, 3, 61)
        interval = invert_over_grid(lambda theta: 1.0 if abs(theta) <= 1.0 + 1e-9 else 0.0, grid, 0.05)
        assert interval.lower == pytest.approx(-1.0)
        assert interval.upper == pytest.approx(1.0)
        assert interval.level == pytest.approx(0.95)
        assert not interval.warnings

    def test_empty_set_warns(self):
        interval = invert_over_grid(lambda theta: 0.0, np.linspace(0, 1, 5), 0.05)
        assert np.isnan(interval.lower)
        assert interval.warnings

    def test_boundary_warns(self):
        interval = invert_over_grid(lambda theta: 1.0, np.linspace(0, 1, 5), 0.05)
        assert any("boundary" in w for w in interval.warnings)
