"""Tests of the statistic catalogue."""

import numpy as np
import pytest
import scipy.stats

from randomization_inference.errors import (
    DegenerateScaleError,
    ParameterError,
    SingularityError,
    StructuralError,
    UndefinedStatisticError,
)
from randomization_inference.sample import Sample
from randomization_inference.stats import (
    STATISTIC_CFGS,
    StudentizedMeanDiffCfg,
    abs_mean,
    autocorr,
    autocorr_studentizer,
    correlation,
    hot_hand_diff,
    hot_hand_rate,
    hot_hand_sigma2,
    hotelling_studentized,
    k_sample_stat,
    mann_kendall,
    match_count,
    mean_diff,
    studentized_correlation,
    studentized_mann_kendall,
    studentized_mean,
    studentized_mean_diff,
    studentized_wilcoxon,
    wilcoxon,
)


@pytest.fixture
def two_samples():
    rng = np.random.default_rng(21)
    return rng.normal(size=12), rng.normal(loc=0.5, scale=2.0, size=17)


class TestOneSample:
    def test_abs_mean(self):
        assert abs_mean([1.0, -3.0]) == pytest.approx(1.0)

    def test_studentized_mean(self):
        assert studentized_mean([1.0, 2.0, 3.0]) == pytest.approx(3.0 * np.sqrt(2.0))

    def test_constant_sample(self):
        with pytest.raises(DegenerateScaleError, match="standard deviation"):
            studentized_mean([2.0, 2.0, 2.0])


class TestTwoSample:
    def test_mean_diff(self):
        assert mean_diff([1.0, 2.0, 3.0], [0.0, 0.0]) == pytest.approx(2.0 * np.sqrt(3.0))
        assert mean_diff([1.0, 2.0, 3.0], [0.0, 0.0], root="N") == pytest.approx(2.0 * np.sqrt(5.0))

    def test_studentized_mean_diff_matches_welch_form(self, two_samples):
        x, y = two_samples
        m, n = len(x), len(y)
        welch = (x.mean() - y.mean()) / np.sqrt(x.var() / m + y.var() / n)
        assert studentized_mean_diff(x, y, root="N") == pytest.approx(welch)
        assert studentized_mean_diff(x, y) == pytest.approx(np.sqrt(m / (m + n)) * welch)

    def test_k_sample_and_hotelling_coincide(self, two_samples):
        x, y = two_samples
        squared = studentized_mean_diff(x, y, root="N") ** 2
        assert k_sample_stat([x, y]) == pytest.approx(squared)
        assert hotelling_studentized(x[:, None], y[:, None]) == pytest.approx(squared)

    def test_wilcoxon_against_mann_whitney(self, two_samples):
        x, y = two_samples
        u_x = scipy.stats.mannwhitneyu(x, y).statistic
        assert wilcoxon(x, y) == pytest.approx(1.0 - u_x / (len(x) * len(y)))

    @pytest.mark.parametrize(
        "x, y, expected", [([1.0, 2.0], [3.0, 4.0], 1.0), ([3.0, 4.0], [1.0, 2.0], 0.0), ([1.0], [1.0], 0.5)]
    )
    def test_wilcoxon_values(self, x, y, expected):
        assert wilcoxon(x, y) == pytest.approx(expected)

    def test_studentized_wilcoxon_antisymmetric(self, two_samples):
        x, y = two_samples
        assert studentized_wilcoxon(x, y) == pytest.approx(-studentized_wilcoxon(y, x))

    def test_too_small(self):
        with pytest.raises(StructuralError, match="at least 2 observation"):
            studentized_mean_diff([1.0], [1.0, 2.0])

    def test_k_sample_needs_two_samples(self):
        with pytest.raises(StructuralError, match="At least two samples"):
            k_sample_stat([[1.0, 2.0, 3.0]])

    def test_k_sample_constant_group(self):
        with pytest.raises(DegenerateScaleError, match="within-group variance"):
            k_sample_stat([[1.0, 1.0], [1.0, 2.0]])

    def test_match_count(self):
        assert match_count([1, 0, 1], [1, 1, 1]) == 2


class TestHotelling:
    def test_symmetric_in_samples(self):
        rng = np.random.default_rng(5)
        x, y = rng.normal(size=(15, 2)), rng.normal(size=(20, 2))
        assert hotelling_studentized(x, y) == pytest.approx(hotelling_studentized(y, x))
        assert hotelling_studentized(x, y) >= 0.0

    def test_singular_covariance(self):
        rng = np.random.default_rng(6)
        x, y = rng.normal(size=(10, 1)), rng.normal(size=(10, 1))
        with pytest.raises(SingularityError):
            hotelling_studentized(np.hstack([x, x]), np.hstack([y, y]))

    def test_sizes_must_exceed_dimension(self):
        with pytest.raises(StructuralError, match="exceed the dimension"):
            hotelling_studentized(np.ones((2, 2)), np.ones((5, 2)))


class TestAssociation:
    def test_correlation_against_pearson(self):
        rng = np.random.default_rng(8)
        x = rng.normal(size=40)
        y = 0.5 * x + rng.normal(size=40)
        assert correlation(x, y) == pytest.approx(np.sqrt(40) * scipy.stats.pearsonr(x, y)[0])

    def test_studentized_correlation_normal_data(self):
        rng = np.random.default_rng(9)
        x, y = rng.normal(size=2000), rng.normal(size=2000)
        # V tends to one for independent coordinates
        assert studentized_correlation(x, y) == pytest.approx(correlation(x, y), rel=0.1)

    def test_constant_coordinate(self):
        with pytest.raises(DegenerateScaleError, match="marginal variance"):
            correlation([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])

    def test_needs_three_pairs(self):
        with pytest.raises(StructuralError, match="At least 3 pairs"):
            correlation([1.0, 2.0], [2.0, 1.0])


class TestTimeSeries:
    def test_autocorr_value(self):
        assert autocorr([1.0, 2.0, 3.0, 4.0]) == pytest.approx(0.5)

    def test_autocorr_studentizer_near_one_for_iid(self):
        x = np.random.default_rng(10).normal(size=5000)
        assert autocorr_studentizer(x) == pytest.approx(1.0, abs=0.1)

    @pytest.mark.parametrize("lag", [0, 4])
    def test_invalid_lag(self, lag):
        with pytest.raises(ParameterError, match="lag must satisfy"):
            autocorr([1.0, 2.0, 3.0, 4.0], lag=lag)

    def test_mann_kendall_increasing(self):
        assert mann_kendall([1.0, 2.0, 3.0, 4.0]) == pytest.approx(2.25)
        assert mann_kendall([4.0, 3.0, 2.0, 1.0]) == pytest.approx(-2.25)

    def test_studentized_mann_kendall_constant(self):
        with pytest.raises(DegenerateScaleError, match="trend studentizer"):
            studentized_mann_kendall([1.0, 1.0, 1.0, 1.0])


class TestHotHand:
    series = [1, 1, 0, 1, 0, 0, 1, 1, 1, 0]

    def test_values(self):
        assert hot_hand_rate(self.series) == pytest.approx(0.5)
        assert hot_hand_diff(self.series) == pytest.approx(0.5 - 2.0 / 3.0)

    def test_undefined(self):
        with pytest.raises(UndefinedStatisticError, match="undefined"):
            hot_hand_diff([1, 1, 1, 1])

    def test_not_binary(self):
        with pytest.raises(StructuralError, match="binary"):
            hot_hand_rate([0, 1, 2, 1])

    def test_streak_length(self):
        with pytest.raises(ParameterError, match="streak length"):
            hot_hand_rate([0, 1, 1], k=3)

    @pytest.mark.parametrize("q, k, expected", [(0.5, 1, 1.0), (0.5, 3, 4.0), (0.25, 1, 1.0)])
    def test_sigma2(self, q, k, expected):
        assert hot_hand_sigma2(q, k) == pytest.approx(expected)


class TestBatchEvaluation:
    def test_batch_matches_scalar(self, two_samples):
        x, y = two_samples
        sample = Sample.two_sample(x, y)
        cfg = StudentizedMeanDiffCfg()
        assert cfg.evaluate(sample.data[None], sample, strict=True)[0] == pytest.approx(studentized_mean_diff(x, y))

    def test_extended_convention_for_zero_scale(self):
        sample = Sample.two_sample([1.0, 1.0], [0.0, 0.0])
        value = StudentizedMeanDiffCfg().evaluate(sample.data[None], sample, strict=False)[0]
        assert value == np.inf

    @pytest.mark.parametrize("statistic_id", sorted(STATISTIC_CFGS))
    def test_catalogue_describes(self, statistic_id):
        cfg = STATISTIC_CFGS[statistic_id]()
        assert cfg.to_dict()["statistic_id"] == statistic_id
        assert isinstance(cfg.describe(), str)
