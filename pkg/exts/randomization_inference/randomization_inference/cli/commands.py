"""Handlers mapping a resolved invocation to exactly one module operation."""

from __future__ import annotations

import dataclasses
import numpy as np
import pandas as pd
from dataclasses import dataclass

from .. import __version__
from ..cluster_art.art import art_confidence_interval, art_test, im_ttest
from ..cluster_art.art_cfg import ART_STATISTIC_CFGS
from ..cluster_art.cluster_scores import cluster_scores_ols
from ..conformal.conformal import full_conformal, interval_exchangeable, split_conformal, upper_bound_exchangeable
from ..conformal.conformal_cfg import ConformalCfg
from ..conformal.predictors import LeastSquaresPredictor, MeanPredictor
from ..engine.randomization_test import RandomizationResult, decide, run_test
from ..errors import ParameterError, StructuralError
from ..experiments.assignment_cfg import ASSIGNMENT_CFGS
from ..experiments.experiment_sample import ExperimentSample
from ..experiments.inference import (
    strong_null_test,
    strong_null_test_resampled,
    weak_null_confidence_interval,
    weak_null_test_pairs,
)
from ..groups.groups_cfg import GROUP_CFGS, GroupCfg
from ..sample import Sample
from ..simlab.registry import make_cfg, run_study
from ..simlab.studies import run_hot_hand_study
from ..stats.statistics_cfg import STATISTIC_CFGS, StatisticCfg
from ..utils.io import label_column, numeric_column, read_table
from ..utils.rng import spawn_rngs
from .run_config import RunConfig

_TWO_SAMPLE_STATISTICS = ("mean_diff", "studentized_mean_diff", "wilcoxon", "studentized_wilcoxon")

VALID_COMBINATIONS: dict[str, dict[str, tuple[str, ...]]] = {
    "one-sample": {"abs_mean": ("sign_change",), "mean": ("sign_change",)},
    "two-sample": {sid: ("full_permutation",) for sid in (*_TWO_SAMPLE_STATISTICS, "match_count")},
    "k-sample": {"k_sample": ("full_permutation",)},
    "hotelling": {"hotelling": ("full_permutation",)},
    "correlation": {"correlation": ("full_permutation",), "studentized_correlation": ("full_permutation",)},
    "autocorr": {"autocorr": ("full_permutation",), "studentized_autocorr": ("full_permutation",)},
    "trend": {"mann_kendall": ("full_permutation",), "studentized_mann_kendall": ("full_permutation",)},
    "hothand": {"hot_hand": ("full_permutation",), "hot_hand_diff": ("full_permutation",)},
}
"""Valid statistic/group pairs per ``test`` subcommand."""

DEFAULT_STATISTICS = {
    "one-sample": "abs_mean",
    "two-sample": "mean_diff",
    "k-sample": "k_sample",
    "hotelling": "hotelling",
    "correlation": "correlation",
    "autocorr": "autocorr",
    "trend": "mann_kendall",
    "hothand": "hot_hand_diff",
}

LAYOUTS = {
    "one-sample": "a single sample",
    "two-sample": "the two-sample layout",
    "k-sample": "the k-sample layout",
    "hotelling": "multivariate two-sample data",
    "correlation": "paired observations",
    "autocorr": "a time series",
    "trend": "a time series",
    "hothand": "a binary series",
}


@dataclass
class CommandOutput:
    """Artifacts of one invocation."""

    payload: dict
    """JSON result."""
    table: pd.DataFrame | None = None
    """Tabular result written as CSV (simulation studies)."""
    histogram: pd.DataFrame | None = None
    """Plot data of the randomization distribution."""
    values: np.ndarray | None = None
    """Randomization distribution, binned when a histogram is requested."""


def valid_pairs(subcommand: str) -> list[str]:
    return [f"{sid}/{gid}" for sid, groups in VALID_COMBINATIONS[subcommand].items() for gid in groups]


def check_compatible(subcommand: str, statistic_id: str, group_id: str):
    """Check a statistic/group combination for a ``test`` subcommand.

    Raises:
        ParameterError: When the pair is not valid. The message lists the valid pairs.
    """
    allowed = VALID_COMBINATIONS[subcommand]
    if statistic_id in allowed and group_id in allowed[statistic_id]:
        return
    message = (
        f"Statistic '{statistic_id}' with group '{group_id}' is not valid for 'test {subcommand}'."
        f" Valid statistic/group pairs: {', '.join(valid_pairs(subcommand))}."
    )
    homes = [sub for sub, stats in VALID_COMBINATIONS.items() if statistic_id in stats]
    if homes and subcommand not in homes:
        message += f" '{statistic_id}' requires {LAYOUTS[homes[0]]} (test {homes[0]})."
    raise ParameterError(message)


def build_statistic(run: RunConfig) -> tuple[StatisticCfg, GroupCfg]:
    """Statistic and group configurations of a ``test`` subcommand.

    Raises:
        ParameterError: When an identifier is unknown, the pair is invalid or the statistic cannot be studentized.
    """
    sub = run.subcommand
    statistic_id = run.statistic or DEFAULT_STATISTICS[sub]
    group_id = run.group or ("sign_change" if sub == "one-sample" else "full_permutation")
    if statistic_id not in STATISTIC_CFGS:
        raise ParameterError(f"Unknown statistic '{statistic_id}'. Known statistics: {sorted(STATISTIC_CFGS)}.")
    if group_id not in GROUP_CFGS:
        raise ParameterError(f"Unknown group '{group_id}'. Known groups: {sorted(GROUP_CFGS)}.")
    check_compatible(sub, statistic_id, group_id)
    return _statistic_cfg(run, statistic_id), GROUP_CFGS[group_id]()


def _statistic_cfg(run: RunConfig, statistic_id: str) -> StatisticCfg:
    cls = STATISTIC_CFGS[statistic_id]
    names = {f.name for f in dataclasses.fields(cls)}
    kwargs = {}
    if run.studentize is not None:
        if "studentize" not in names:
            raise ParameterError(f"Statistic '{statistic_id}' has no studentized form.")
        kwargs["studentize"] = run.studentize
    # streak statistics are one-sided by construction
    kwargs["absolute"] = run.subcommand != "hothand" and not run.options.get("one_sided", False)
    for option, name in (("lag", "lag"), ("k", "streak_length"), ("truncation_lag", "truncation_lag")):
        if run.options.get(option) is not None and name in names:
            kwargs[name] = run.options[option]
    return cls(**kwargs)


def _binary_labels(frame: pd.DataFrame, column: str, path: str) -> np.ndarray:
    labels = numeric_column(frame, column, path)
    if not np.all((labels == 0) | (labels == 1)) or np.unique(labels).shape[0] != 2:
        raise StructuralError(
            f"Group column '{column}' must hold the labels 0 and 1 (1 marks the first sample), both present."
        )
    return labels.astype(np.int64)


def load_test_sample(run: RunConfig, statistic_id: str) -> Sample:
    """Sample layout of a ``test`` subcommand read from ``--input``."""
    sub = run.subcommand
    if sub in ("one-sample", "autocorr", "trend", "hothand"):
        (column, *_) = run.require_cols(1, "x")
        frame = read_table(run.input)
        return Sample.one_sample(numeric_column(frame, column, run.input))
    if sub == "hotelling":
        columns = run.require_cols(2, "y1[,y2,...],group")
        frame = read_table(run.input)
        data = np.column_stack([numeric_column(frame, c, run.input) for c in columns[:-1]])
        return Sample(data=data, fixed=_binary_labels(frame, columns[-1], run.input))
    usage = "x,y" if sub == "correlation" or run.options.get("wide") else "y,group"
    first, second, *_ = run.require_cols(2, usage)
    frame = read_table(run.input)
    if sub == "correlation":
        return Sample.bivariate(numeric_column(frame, first, run.input), numeric_column(frame, second, run.input))
    if sub == "k-sample":
        codes, labels = label_column(frame, second, run.input)
        if labels.shape[0] < 2:
            raise StructuralError(f"Group column '{second}' holds a single group; at least two are required.")
        return Sample(data=numeric_column(frame, first, run.input), fixed=codes)
    if statistic_id == "match_count":
        return Sample(data=numeric_column(frame, first, run.input), fixed=numeric_column(frame, second, run.input))
    if run.options.get("wide"):
        x = numeric_column(frame, first, run.input, allow_empty=True)
        y = numeric_column(frame, second, run.input, allow_empty=True)
        return Sample.two_sample(x, y)
    return Sample(data=numeric_column(frame, first, run.input), fixed=_binary_labels(frame, second, run.input))


def result_output(run: RunConfig, result: RandomizationResult, **configs) -> CommandOutput:
    """JSON result of a randomization test with the config echo and library version."""
    payload = {"method": run.method, **result.to_dict()}
    if run.options.get("randomized"):
        # the decision draw uses its own stream so it does not reuse Monte Carlo numbers
        decision = decide(result, randomized=True, rng=spawn_rngs(run.seed, 2)[1])
        payload["decision"] = {"reject": decision.reject, "phi": decision.phi}
    payload["version"] = __version__
    payload["config_echo"] = {**run.to_dict(), **{name: cfg.to_dict() for name, cfg in configs.items()}}
    return CommandOutput(payload=payload, values=result.values)


def _covariates(frame: pd.DataFrame, columns: list[str], path: str) -> np.ndarray | None:
    if not columns:
        return None
    return np.column_stack([numeric_column(frame, c, path) for c in columns])


def _query(run: RunConfig, num_covariates: int) -> np.ndarray | None:
    x_new = run.options.get("x")
    if num_covariates == 0:
        return None
    if x_new is None or len(x_new) != num_covariates:
        raise StructuralError(f"'{run.method}' requires --x with {num_covariates} comma-separated value(s).")
    return np.asarray(x_new, dtype=float)


"""
Commands.
"""


def test_command(run: RunConfig) -> CommandOutput:
    statistic_cfg, group_cfg = build_statistic(run)
    sample = load_test_sample(run, statistic_cfg.statistic_id)
    result = run_test(sample, statistic_cfg, group_cfg.build(sample), run.test_cfg)
    return result_output(run, result, statistic_cfg=statistic_cfg, group_cfg=group_cfg)


def _experiment_sample(run: RunConfig, usage: str) -> ExperimentSample:
    y_col, d_col, *_ = run.require_cols(2, usage)
    frame = read_table(run.input)
    options = run.options
    strata = None if options.get("strata") is None else label_column(frame, options["strata"], run.input)[0]
    pairs = None if options.get("pairs") is None else label_column(frame, options["pairs"], run.input)[0]
    return ExperimentSample(
        y=numeric_column(frame, y_col, run.input),
        d=numeric_column(frame, d_col, run.input),
        z=_covariates(frame, options.get("covariates") or [], run.input),
        strata=strata,
        pairs=pairs,
    )


def experiment_strong_command(run: RunConfig) -> CommandOutput:
    x = _experiment_sample(run, "y,d")
    scheme_id = run.group or "complete"
    if scheme_id not in ASSIGNMENT_CFGS:
        raise ParameterError(f"Unknown assignment scheme '{scheme_id}'. Known schemes: {sorted(ASSIGNMENT_CFGS)}.")
    kwargs = {}
    if scheme_id == "complete":
        kwargs["m"] = x.num_treated
    elif scheme_id in ("simple_random", "stratified_block") and run.options.get("q") is not None:
        kwargs["q"] = run.options["q"]
    scheme_cfg = ASSIGNMENT_CFGS[scheme_id](**kwargs)
    statistic_id = run.statistic or "mean_diff"
    if statistic_id not in _TWO_SAMPLE_STATISTICS:
        raise ParameterError(
            f"Statistic '{statistic_id}' is not valid for 'experiment strong'. Valid statistic/scheme pairs:"
            f" {', '.join(f'{s}/{scheme_id}' for s in _TWO_SAMPLE_STATISTICS)}."
        )
    statistic_cfg = _statistic_cfg(run, statistic_id)
    if run.options.get("resample"):
        if run.mode != "mc":
            raise ParameterError("--resample redraws treatments from the scheme and requires --mc B.")
        result = strong_null_test_resampled(x, scheme_cfg, statistic_cfg, cfg=run.test_cfg)
    else:
        result = strong_null_test(x, scheme_cfg, statistic_cfg, run.test_cfg)
    return result_output(run, result, statistic_cfg=statistic_cfg, scheme_cfg=scheme_cfg)


def experiment_weak_command(run: RunConfig) -> CommandOutput:
    if run.options.get("pairs") is None:
        raise StructuralError("'experiment weak' requires --pairs with the pair label column.")
    x = _experiment_sample(run, "y,d")
    studentize = True if run.studentize is None else run.studentize
    theta0 = run.options.get("theta0") or 0.0
    result = weak_null_test_pairs(x, theta0, cfg=run.test_cfg, studentize=studentize)
    output = result_output(run, result)
    if run.options.get("ci"):
        interval = weak_null_confidence_interval(x, cfg=run.test_cfg, studentize=studentize)
        output.payload["confidence_interval"] = interval.to_dict()
    return output


def _conformal_payload(run: RunConfig, key: str, value, notes: list[str], cfg: ConformalCfg | None = None) -> dict:
    echo = run.to_dict()
    if cfg is not None:
        echo["conformal_cfg"] = cfg.to_dict()
    return {
        "method": run.method,
        key: value.to_dict(),
        "warnings": list(notes),
        "version": __version__,
        "config_echo": echo,
    }


def conformal_full_command(run: RunConfig) -> CommandOutput:
    y_col, *x_cols = run.require_cols(1, "y[,x1,...]")
    frame = read_table(run.input)
    y = numeric_column(frame, y_col, run.input)
    x = _covariates(frame, x_cols, run.input)
    score = run.options.get("score") or ("abs_residual" if x is not None else "abs_deviation_from_median")
    cfg = ConformalCfg(alpha=run.alpha, score=score, num_workers=run.test_cfg.num_workers)
    if run.options.get("grid_points") is not None:
        cfg = dataclasses.replace(cfg, num_grid_points=run.options["grid_points"])
    prediction_set = full_conformal(y, x, _query(run, len(x_cols)), cfg)
    return CommandOutput(payload=_conformal_payload(run, "prediction_set", prediction_set, prediction_set.notes, cfg))


def conformal_split_command(run: RunConfig) -> CommandOutput:
    train, calib = run.options.get("train"), run.options.get("calib")
    if train is None or calib is None:
        raise StructuralError("'conformal split' requires --train and --calib files.")
    if not run.cols:
        raise StructuralError("'conformal split' requires --cols y[,x1,...].")
    y_col, *x_cols = run.cols
    train_frame, calib_frame = read_table(train), read_table(calib)
    predictor = LeastSquaresPredictor() if x_cols else MeanPredictor()
    interval = split_conformal(
        _covariates(train_frame, x_cols, train),
        numeric_column(train_frame, y_col, train),
        _covariates(calib_frame, x_cols, calib),
        numeric_column(calib_frame, y_col, calib),
        _query(run, len(x_cols)),
        run.alpha,
        predictor,
    )
    return CommandOutput(payload=_conformal_payload(run, "interval", interval, interval.notes))


def conformal_bound_command(run: RunConfig) -> CommandOutput:
    (column, *_) = run.require_cols(1, "x")
    x = numeric_column(read_table(run.input), column, run.input)
    center = run.options.get("center")
    if center is None:
        interval = upper_bound_exchangeable(x, run.alpha)
        return CommandOutput(payload=_conformal_payload(run, "interval", interval, interval.notes))
    cfg = ConformalCfg(alpha=run.alpha, num_workers=run.test_cfg.num_workers)
    prediction_set = interval_exchangeable(x, run.alpha, center=center, cfg=cfg)
    return CommandOutput(payload=_conformal_payload(run, "prediction_set", prediction_set, prediction_set.notes, cfg))


def cluster_art_command(run: RunConfig) -> CommandOutput:
    y_col, cluster_col, *x_cols = run.require_cols(2, "y,cluster[,x1,...]")
    frame = read_table(run.input)
    y = numeric_column(frame, y_col, run.input)
    clusters, _ = label_column(frame, cluster_col, run.input)
    x = _covariates(frame, x_cols, run.input)
    options = run.options
    coefficient = options.get("coefficient")
    coefficient = (1 if x is not None else 0) if coefficient is None else coefficient
    add_intercept = not options.get("no_intercept", False)
    statistic_id = run.statistic or "tstat"
    group_id = run.group or "cluster_sign_change"
    if statistic_id not in ART_STATISTIC_CFGS or group_id != "cluster_sign_change":
        raise ParameterError(
            f"Statistic '{statistic_id}' with group '{group_id}' is not valid for 'cluster art'. Valid statistic/group"
            f" pairs: {', '.join(f'{s}/cluster_sign_change' for s in ART_STATISTIC_CFGS)}."
        )
    statistic_cfg = ART_STATISTIC_CFGS[statistic_id]()
    scores = cluster_scores_ols(
        y, x, clusters, coefficient=coefficient, theta0=options.get("theta0") or 0.0, add_intercept=add_intercept
    )
    cfg = run.test_cfg
    if run.mode is None and 2**scores.q > cfg.enumeration_cap:
        cfg = dataclasses.replace(cfg, mode="mc")
    result = art_test(scores, statistic_cfg, cfg)
    output = result_output(run, result, statistic_cfg=statistic_cfg)
    if options.get("ttest"):
        output.payload["t_comparison"] = im_ttest(scores, run.alpha).to_dict()
    if options.get("ci"):
        interval = art_confidence_interval(
            y, x, clusters, coefficient=coefficient, cfg=cfg, add_intercept=add_intercept
        )
        output.payload["confidence_interval"] = interval.to_dict()
    return output


def simlab_command(run: RunConfig) -> CommandOutput:
    options = run.options
    cfg = make_cfg(
        run.subcommand,
        reps=options.get("reps"),
        seed=run.seed,
        alpha=options.get("alpha"),
        num_workers=run.test_cfg.num_workers if options.get("workers") is not None else None,
        progress=options.get("progress") or None,
    )
    histogram = None
    if run.subcommand == "hot_hand":
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
        table = diagnostics.summary_table()
        histogram = diagnostics.histogram(options.get("bins") or cfg.bins)
    else:
        table = run_study(run.subcommand, cfg)
    payload = {
        "method": run.method,
        "study": run.subcommand,
        "rows": table.to_dict(orient="records"),
        "version": __version__,
        "config_echo": {**run.to_dict(), "study_cfg": cfg.to_dict()},
    }
    return CommandOutput(payload=payload, table=table, histogram=histogram)


def histogram_table(values: np.ndarray, bins: int) -> pd.DataFrame:
    """Histogram bins of a randomization distribution."""
    counts, edges = np.histogram(values[np.isfinite(values)], bins=bins)
    return pd.DataFrame({"bin_left": edges[:-1], "bin_right": edges[1:], "count": counts})


COMMANDS = {
    "test": test_command,
    "experiment strong": experiment_strong_command,
    "experiment weak": experiment_weak_command,
    "conformal full": conformal_full_command,
    "conformal split": conformal_split_command,
    "conformal bound": conformal_bound_command,
    "cluster art": cluster_art_command,
    "simlab": simlab_command,
}
"""Handler per command (``test`` and ``simlab`` dispatch on their subcommand inside the handler)."""
