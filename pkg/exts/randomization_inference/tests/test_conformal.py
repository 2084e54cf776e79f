"""Tests of conformal prediction."""

import math
import numpy as np
import pytest

from randomization_inference.conformal import (
    ConformalCfg,
    ConstantPredictor,
    LeastSquaresPredictor,
    MeanPredictor,
    conformal_rank,
    full_conformal,
    interval_exchangeable,
    split_conformal,
    upper_bound_exchangeable,
)
from randomization_inference.errors import ParameterError, PredictorFailure, StructuralError


class _FailingPredictor:
    def fit(self, x, y):
        raise ValueError("boom")

    def predict(self, model, x):
        return np.zeros(1)


@pytest.fixture
def regression():
    rng = np.random.default_rng(13)
    x = rng.uniform(-1.0, 1.0, size=40)
    y = 2.0 * x + rng.normal(scale=0.2, size=40)
    return x, y


class TestRank:
    @pytest.mark.parametrize("n, alpha, expected", [(19, 0.05, 19), (20, 0.05, 20), (10, 0.05, 11), (9, 0.1, 9)])
    def test_rank(self, n, alpha, expected):
        assert conformal_rank(n, alpha) == expected

    def test_invalid_alpha(self):
        with pytest.raises(ParameterError, match="alpha must lie in"):
            conformal_rank(10, 1.0)


class TestUpperBound:
    def test_order_statistic(self):
        bound = upper_bound_exchangeable(np.arange(19.0, 0.0, -1.0), 0.05)
        assert bound.k == 19
        assert bound.upper == 19.0
        assert bound.lower == -math.inf
        assert bound.level == pytest.approx(0.95)
        assert not bound.notes

    def test_unbounded_for_small_samples(self):
        bound = upper_bound_exchangeable(np.arange(10.0), 0.05)
        assert bound.upper == math.inf
        assert bound.notes

    def test_empty(self):
        with pytest.raises(StructuralError, match="At least one"):
            upper_bound_exchangeable(np.array([]), 0.1)

    def test_coverage(self):
        rng = np.random.default_rng(3)
        draws = rng.normal(size=(4000, 20))
        covered = [upper_bound_exchangeable(row[:19], 0.05).contains(row[19]) for row in draws]
        # coverage is exactly k / (n + 1) = 0.95 for continuous data
        assert np.mean(covered) == pytest.approx(0.95, abs=0.015)


class TestFullConformal:
    def test_raw_value_matches_upper_bound(self):
        y = np.random.default_rng(1).normal(size=29)
        prediction = full_conformal(y, cfg=ConformalCfg(score="raw_value", alpha=0.1))
        bound = upper_bound_exchangeable(y, 0.1).upper
        assert prediction.upper <= bound
        assert bound - prediction.upper <= prediction.grid_spacing
        assert any("boundary" in note for note in prediction.notes)

    def test_regression_set_covers_the_line(self, regression):
        x, y = regression
        prediction = full_conformal(y, x, 0.5, ConformalCfg(alpha=0.1))
        assert len(prediction.intervals) == 1
        assert prediction.contains(1.0)
        assert prediction.upper - prediction.lower < 2.0
        assert prediction.k == conformal_rank(40, 0.1)

    def test_explicit_grid(self, regression):
        x, y = regression
        grid = np.linspace(-3.0, 3.0, 61)
        prediction = full_conformal(y, x, 0.0, ConformalCfg(grid=grid))
        assert prediction.num_grid_points == 61
        assert prediction.grid_spacing == pytest.approx(0.1)
        assert prediction.lower in grid

    def test_unbounded(self):
        prediction = full_conformal(np.arange(5.0), cfg=ConformalCfg(score="raw_value", alpha=0.1))
        assert prediction.intervals == [(-math.inf, math.inf)]
        assert prediction.notes

    def test_sets_are_nested_in_alpha(self, regression):
        x, y = regression
        wide = full_conformal(y, x, 0.5, ConformalCfg(alpha=0.05))
        narrow = full_conformal(y, x, 0.5, ConformalCfg(alpha=0.3))
        for lo, hi in narrow.intervals:
            assert any(w_lo <= lo and hi <= w_hi for w_lo, w_hi in wide.intervals)
        assert wide.upper - wide.lower > narrow.upper - narrow.lower

    def test_fixed_predictor_matches_split(self):
        y = np.random.default_rng(8).normal(size=29)
        grid = np.linspace(-5.0, 5.0, 10001)
        prediction = full_conformal(y, cfg=ConformalCfg(predictor=ConstantPredictor(0.0), alpha=0.1, grid=grid))
        interval = split_conformal(None, np.zeros(3), None, y, None, 0.1, ConstantPredictor(0.0))
        assert len(prediction.intervals) == 1
        assert prediction.lower == pytest.approx(interval.lower, abs=prediction.grid_spacing)
        assert prediction.upper == pytest.approx(interval.upper, abs=prediction.grid_spacing)

    def test_needs_query_point(self, regression):
        x, y = regression
        with pytest.raises(StructuralError, match="query point"):
            full_conformal(y, x)

    def test_residuals_need_covariates_or_predictor(self):
        with pytest.raises(StructuralError, match="bare-value predictor"):
            full_conformal(np.arange(5.0))

    def test_bare_value_predictor(self):
        y = np.arange(1.0, 20.0)
        prediction = full_conformal(y, cfg=ConformalCfg(predictor=ConstantPredictor(10.0)))
        assert prediction.contains(10.0)
        assert not prediction.contains(25.0)

    def test_predictor_failure(self):
        with pytest.raises(PredictorFailure, match="boom"):
            full_conformal(np.arange(5.0), cfg=ConformalCfg(predictor=_FailingPredictor(), alpha=0.5))

    def test_empty_calibration(self):
        with pytest.raises(StructuralError, match="at least one calibration point"):
            full_conformal(np.array([]), cfg=ConformalCfg(score="raw_value"))

    @pytest.mark.slow
    def test_workers_do_not_change_the_set(self, regression):
        x, y = regression
        sequential = full_conformal(y, x, 0.2, ConformalCfg(chunk_size=32))
        parallel = full_conformal(y, x, 0.2, ConformalCfg(chunk_size=32, num_workers=2))
        assert sequential.intervals == parallel.intervals


class TestIntervalExchangeable:
    @pytest.mark.parametrize("center", ["median", "mean"])
    def test_centered(self, center):
        x = np.arange(1.0, 20.0)
        prediction = interval_exchangeable(x, 0.1, center=center)
        assert prediction.contains(10.0)
        assert prediction.lower < 10.0 < prediction.upper
        assert prediction.level == pytest.approx(0.9)

    def test_unknown_center(self):
        with pytest.raises(ParameterError, match="Unknown center"):
            interval_exchangeable(np.arange(5.0), 0.1, center="mode")


class TestSplitConformal:
    def test_mean_predictor(self):
        calib = np.arange(1.0, 20.0)
        interval = split_conformal(None, np.zeros(4), None, calib, None, 0.05, MeanPredictor())
        assert interval.center == 0.0
        assert (interval.lower, interval.upper) == (-19.0, 19.0)
        assert interval.k == 19

    def test_least_squares_center(self, regression):
        x, y = regression
        interval = split_conformal(x[:20], y[:20], x[20:], y[20:], 0.5, 0.1, LeastSquaresPredictor())
        assert interval.center == pytest.approx(1.0, abs=0.2)
        assert interval.contains(interval.center)
        assert interval.width == pytest.approx(interval.upper - interval.lower)

    def test_unbounded_note(self):
        interval = split_conformal(None, np.zeros(3), None, np.ones(5), None, 0.1, MeanPredictor())
        assert interval.upper == math.inf
        assert interval.notes

    def test_empty_training(self):
        with pytest.raises(StructuralError, match="training point"):
            split_conformal(None, np.array([]), None, np.ones(3), None, 0.5, MeanPredictor())
