"""Tests of assignment schemes and experiment inference."""

import numpy as np
import pytest

from randomization_inference.engine import RandomizationTestCfg
from randomization_inference.errors import ParameterError, StructuralError
from randomization_inference.experiments import (
    CompleteRandomizationCfg,
    ExperimentSample,
    MatchedPairsCfg,
    SimpleRandomCfg,
    StratifiedBlockCfg,
    assign,
    check_conforms,
    draw_assignments,
    make_design,
    pair_by_covariates,
    pair_variance_report,
    strong_null_test,
    strong_null_test_resampled,
    weak_null_confidence_interval,
    weak_null_test_pairs,
)
from randomization_inference.stats import StudentizedMeanDiffCfg


def _pairs_experiment(diffs, base=1.0):
    """Matched-pair experiment whose j-th pair has treated-minus-control difference ``diffs[j]``."""
    diffs = np.asarray(diffs, dtype=float)
    k = diffs.shape[0]
    y = np.full(2 * k, base)
    y[0::2] += diffs
    return ExperimentSample(
        y=y,
        d=np.tile([1, 0], k),
        z=np.repeat(np.arange(k, dtype=float), 2),
        pairs=np.repeat(np.arange(k), 2),
    )


@pytest.fixture
def shifted_experiment():
    y = np.array([10.1, 10.2, 10.3, 10.4, 0.1, 0.2, 0.3, 0.4])
    d = np.array([1, 1, 1, 1, 0, 0, 0, 0])
    return ExperimentSample(y=y, d=d, strata=np.array([0, 1, 0, 1, 0, 1, 0, 1]))


class TestExperimentSample:
    def test_treatments_must_be_binary(self):
        with pytest.raises(StructuralError, match="0 or 1"):
            ExperimentSample(y=[1.0, 2.0], d=[0, 2])

    def test_length_mismatch(self):
        with pytest.raises(StructuralError, match="do not match"):
            ExperimentSample(y=[1.0, 2.0, 3.0], d=[0, 1])

    def test_groups_act_on_treatments(self, shifted_experiment):
        sample = shifted_experiment.to_sample()
        np.testing.assert_array_equal(sample.data, shifted_experiment.d)
        np.testing.assert_array_equal(sample.fixed, shifted_experiment.y)


class TestPairing:
    def test_scalar_covariates_are_sorted(self):
        pairing = pair_by_covariates(np.array([5.0, 1.0, 4.0, 2.0]))
        np.testing.assert_array_equal(pairing.members, [[1, 3], [2, 0]])
        assert pairing.discrepancy == pytest.approx(0.5)

    def test_vector_covariates_are_greedy(self):
        z = np.array([[0.0, 0.0], [10.0, 10.0], [0.1, 0.0], [10.0, 10.2]])
        pairing = pair_by_covariates(z)
        assert {tuple(sorted(p)) for p in pairing.members.tolist()} == {(0, 2), (1, 3)}

    def test_odd_units(self):
        with pytest.raises(StructuralError, match="even, positive number"):
            pair_by_covariates(np.arange(5.0))


class TestAssignment:
    def test_complete_randomization_counts(self):
        cfg = CompleteRandomizationCfg(m=3)
        d = draw_assignments(cfg, make_design(cfg, np.zeros(10)), np.random.default_rng(0), 200)
        assert np.all(d.sum(axis=1) == 3)

    def test_stratified_counts(self):
        cfg = StratifiedBlockCfg(q=0.5)
        z = np.array([0, 0, 0, 0, 1, 1, 1])
        d = draw_assignments(cfg, make_design(cfg, z), np.random.default_rng(1), 200)
        assert np.all(d[:, :4].sum(axis=1) == 2)
        # round(0.5 * 3) rounds the half up
        assert np.all(d[:, 4:].sum(axis=1) == 2)

    def test_matched_pairs_one_per_pair(self):
        cfg = MatchedPairsCfg()
        design = make_design(cfg, np.arange(8.0))
        d = draw_assignments(cfg, design, np.random.default_rng(2), 100)
        assert np.all(d[:, design.members].sum(axis=2) == 1)

    def test_simple_random_rate(self):
        cfg = SimpleRandomCfg(q=0.3)
        d = draw_assignments(cfg, make_design(cfg, np.zeros(50)), np.random.default_rng(3), 400)
        assert d.mean() == pytest.approx(0.3, abs=0.02)

    def test_assign_is_deterministic(self):
        cfg = CompleteRandomizationCfg(m=2)
        a = assign(cfg, np.zeros(6), np.random.default_rng(7))
        b = assign(cfg, np.zeros(6), np.random.default_rng(7))
        np.testing.assert_array_equal(a, b)

    @pytest.mark.parametrize("cfg", [SimpleRandomCfg(q=1.0), CompleteRandomizationCfg(m=0)])
    def test_infeasible_schemes(self, cfg):
        with pytest.raises(ParameterError, match="requires 0 <"):
            assign(cfg, np.zeros(4), np.random.default_rng(0))

    def test_check_conforms(self, shifted_experiment):
        with pytest.raises(StructuralError, match="m=3"):
            check_conforms(CompleteRandomizationCfg(m=3), shifted_experiment)


class TestStrongNull:
    def test_complete_randomization(self, shifted_experiment):
        result = strong_null_test(shifted_experiment, CompleteRandomizationCfg(m=4))
        assert result.num_elements == 40320
        # the two extreme assignments reach the observed absolute difference
        assert result.p_hat == pytest.approx(2.0 / 70.0)
        assert result.extras["scheme"] == "complete"

    def test_stratified_block(self, shifted_experiment):
        result = strong_null_test(shifted_experiment, StratifiedBlockCfg(q=0.5), StudentizedMeanDiffCfg(absolute=True))
        assert result.num_elements == 576
        assert result.group.startswith("StratifiedPermutation")

    def test_matched_pairs(self):
        x = _pairs_experiment([1.0, 2.0, 0.5, 1.5])
        result = strong_null_test(x, MatchedPairsCfg())
        assert result.num_elements == 16
        assert result.p_hat == pytest.approx(2.0 / 16.0)

    def test_rejects_non_comparison_statistic(self, shifted_experiment):
        from randomization_inference.stats import AbsMeanCfg

        with pytest.raises(StructuralError, match="does not compare treated and control"):
            strong_null_test(shifted_experiment, CompleteRandomizationCfg(m=4), AbsMeanCfg())

    def test_resampled_is_seeded(self, shifted_experiment):
        scheme = CompleteRandomizationCfg(m=4)
        first = strong_null_test_resampled(shifted_experiment, scheme, b=200, seed=17)
        second = strong_null_test_resampled(shifted_experiment, scheme, b=200, seed=17)
        np.testing.assert_array_equal(first.values, second.values)
        assert first.num_elements == 200
        assert first.group == "Resampled(complete)"
        assert first.seed == 17

    def test_resampled_needs_draws(self, shifted_experiment):
        with pytest.raises(ParameterError, match="b >= 2"):
            strong_null_test_resampled(shifted_experiment, CompleteRandomizationCfg(m=4), b=1, seed=0)


class TestWeakNull:
    @pytest.mark.parametrize("studentize", [False, True])
    def test_constant_effect(self, studentize):
        result = weak_null_test_pairs(_pairs_experiment([1.0, 1.0, 1.0, 1.0]), studentize=studentize)
        assert result.num_elements == 16
        assert result.p_hat == pytest.approx(2.0 / 16.0)
        assert result.extras["estimate"] == pytest.approx(1.0)
        assert result.extras["num_pairs"] == 4

    def test_variance_report(self):
        report = pair_variance_report(_pairs_experiment([1.0, 1.0, 1.0, 1.0]))
        assert report.tau2 == pytest.approx(1.0)
        assert report.lam == pytest.approx(1.0)
        assert report.variance == pytest.approx(0.5)
        assert not report.clipped

    def test_shift_by_theta0(self):
        x = _pairs_experiment([2.0, 2.5, 1.5, 2.2, 1.8, 2.1])
        result = weak_null_test_pairs(x, theta0=2.0, studentize=False)
        assert result.p_hat > 0.05
        assert result.extras["theta0"] == 2.0

    def test_requires_pairs(self, shifted_experiment):
        with pytest.raises(StructuralError, match="no pair labels"):
            weak_null_test_pairs(shifted_experiment)

    def test_requires_two_pairs(self):
        with pytest.raises(StructuralError, match="at least two pairs"):
            weak_null_test_pairs(_pairs_experiment([1.0]))

    def test_monte_carlo_mode(self):
        x = _pairs_experiment(np.linspace(0.5, 1.5, 30))
        cfg = RandomizationTestCfg(mode="mc", num_samples=999, seed=5)
        result = weak_null_test_pairs(x, cfg=cfg)
        assert result.mode == "mc"
        assert result.p_hat < 0.01

    def test_confidence_interval(self):
        diffs = np.array([1.0, 1.5, 0.8, 1.2, 0.9, 1.1])
        interval = weak_null_confidence_interval(
            _pairs_experiment(diffs), grid=np.linspace(-2.0, 4.0, 121), studentize=False
        )
        assert interval.lower < diffs.mean() < interval.upper
        assert interval.level == pytest.approx(0.95)
        assert 0.0 < interval.lower
