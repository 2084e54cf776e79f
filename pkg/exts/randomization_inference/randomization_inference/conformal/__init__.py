"""Sub-package with conformal prediction sets obtained by inverting permutation tests."""

from .conformal import (
    PredictionInterval,
    PredictionSet,
    conformal_rank,
    full_conformal,
    interval_exchangeable,
    split_conformal,
    upper_bound_exchangeable,
)
from .conformal_cfg import ConformalCfg
from .predictors import ConstantPredictor, LeastSquaresPredictor, MeanPredictor, MedianPredictor, Predictor
