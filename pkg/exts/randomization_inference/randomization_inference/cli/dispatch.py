"""Command-line entry point ``randinf``.

Usage::

    randinf test two-sample --input data.csv --cols y,group --statistic studentized_mean_diff --mc 9999 --seed 1
    randinf experiment weak --input pairs.csv --cols y,d --pairs pair --exact
    randinf conformal full --input calib.csv --cols y,x --x 0.5
    randinf cluster art --input panel.csv --cols y,state,x --ttest
    randinf simlab unequal_variances --reps 2000 --seed 7 --workers -1
"""

from __future__ import annotations

import argparse
import logging
import sys

from ..errors import ParameterError, StructuralError
from ..simlab.registry import registry as study_registry
from ..utils.io import dump_json, dump_table
from .cli_args import add_randomization_args, add_statistic_args
from .commands import COMMANDS, VALID_COMBINATIONS, CommandOutput, histogram_table
from .run_config import RunConfig

logger = logging.getLogger(__name__)

OPTION_KEYS = (
    "one_sided",
    "randomized",
    "wide",
    "lag",
    "k",
    "truncation_lag",
    "strata",
    "pairs",
    "covariates",
    "q",
    "resample",
    "theta0",
    "ci",
    "x",
    "score",
    "grid_points",
    "train",
    "calib",
    "center",
    "coefficient",
    "ttest",
    "no_intercept",
    "reps",
    "progress",
    "bins",
)
"""Subcommand-specific arguments collected into :attr:`RunConfig.options`."""


def _names(value: str) -> list[str]:
    return [v.strip() for v in value.split(",") if v.strip()]


def _floats(value: str) -> list[float]:
    try:
        return [float(v) for v in _names(value)]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, received '{value}'") from e


def build_parser() -> argparse.ArgumentParser:
    """Parser with the nested ``command subcommand`` layout.

    The shared flags live on parent parsers so that they can follow the subcommand.
    """
    common = argparse.ArgumentParser(add_help=False)
    add_randomization_args(common)
    statistic = argparse.ArgumentParser(add_help=False)
    add_statistic_args(statistic)
    statistic_no_group = argparse.ArgumentParser(add_help=False)
    add_statistic_args(statistic_no_group, group=False)

    parser = argparse.ArgumentParser(prog="randinf", description="Randomization tests and conformal prediction.")
    commands = parser.add_subparsers(dest="command", required=True)

    # -- test
    test = commands.add_parser("test", help="Randomization test of a group-invariance hypothesis.")
    test_subcommands = test.add_subparsers(dest="subcommand", required=True)
    for name in VALID_COMBINATIONS:
        sub = test_subcommands.add_parser(name, parents=[common, statistic], help=f"Test on {name} data.")
        if name == "two-sample":
            sub.add_argument("--wide", action="store_true", default=False, help="Columns x,y hold the two samples.")
        if name == "autocorr":
            sub.add_argument("--lag", type=int, default=None, help="Autocorrelation lag. Defaults to 1.")
        if name in ("autocorr", "trend"):
            sub.add_argument("--truncation-lag", dest="truncation_lag", type=int, default=None)
        if name == "hothand":
            sub.add_argument("--k", type=int, default=None, help="Streak length. Defaults to 1.")

    # -- experiment
    experiment = commands.add_parser("experiment", help="Inference on treatment effects in a randomized experiment.")
    experiment_subcommands = experiment.add_subparsers(dest="subcommand", required=True)
    for name, help_text in (("strong", "Strong (sharp) null of no effect."), ("weak", "Zero average effect, pairs.")):
        sub = experiment_subcommands.add_parser(name, parents=[common, statistic_no_group], help=help_text)
        sub.add_argument("--pairs", type=str, default=None, help="Column of pair labels.")
        sub.add_argument("--covariates", type=_names, default=None, help="Comma-separated covariate columns.")
        if name == "strong":
            sub.add_argument("--scheme", type=str, default=None, help="Assignment scheme. Defaults to complete.")
            sub.add_argument("--strata", type=str, default=None, help="Column of stratum labels.")
            sub.add_argument("--q", type=float, default=None, help="Treatment probability of the scheme.")
            sub.add_argument(
                "--resample", action="store_true", default=False, help="Redraw treatments from the scheme."
            )
        else:
            sub.add_argument("--theta0", type=float, default=None, help="Hypothesized average effect. Defaults to 0.")
            sub.add_argument("--ci", action="store_true", default=False, help="Report the inverted confidence set.")

    # -- conformal
    conformal = commands.add_parser("conformal", help="Conformal prediction.")
    conformal_subcommands = conformal.add_subparsers(dest="subcommand", required=True)
    full = conformal_subcommands.add_parser("full", parents=[common], help="Full conformal prediction set.")
    full.add_argument("--score", type=str, default=None, help="Conformity score.")
    full.add_argument("--grid-points", dest="grid_points", type=int, default=None, help="Number of grid points.")
    split = conformal_subcommands.add_parser("split", parents=[common], help="Split conformal prediction interval.")
    split.add_argument("--train", type=str, default=None, help="CSV file of the training split.")
    split.add_argument("--calib", type=str, default=None, help="CSV file of the calibration split.")
    for sub in (full, split):
        sub.add_argument("--x", type=_floats, default=None, help="Comma-separated covariates of the query point.")
    bound = conformal_subcommands.add_parser("bound", parents=[common], help="Bound for the next exchangeable value.")
    bound.add_argument(
        "--center", choices=("median", "mean"), default=None, help="Two-sided interval around the center."
    )

    # -- cluster
    cluster = commands.add_parser("cluster", help="Approximate randomization test with few clusters.")
    cluster_subcommands = cluster.add_subparsers(dest="subcommand", required=True)
    art = cluster_subcommands.add_parser("art", parents=[common, statistic], help="Cluster sign-change test.")
    art.add_argument("--coefficient", type=int, default=None, help="Index of the tested coefficient.")
    art.add_argument("--theta0", type=float, default=None, help="Hypothesized coefficient. Defaults to 0.")
    art.add_argument("--ci", action="store_true", default=False, help="Report the inverted confidence set.")
    art.add_argument("--ttest", action="store_true", default=False, help="Report the Student-t comparison.")
    art.add_argument("--no-intercept", dest="no_intercept", action="store_true", default=False)

    # -- simlab
    simlab = commands.add_parser("simlab", help="Monte Carlo calibration studies.")
    simlab_subcommands = simlab.add_subparsers(dest="subcommand", required=True)
    for study in study_registry.values():
        sub = simlab_subcommands.add_parser(study.id, parents=[common], help=study.description)
        sub.add_argument("--reps", type=int, default=None, help="Number of replications.")
        sub.add_argument("--progress", action="store_true", default=False, help="Show a progress bar.")
    return parser


def resolve(args_cli: argparse.Namespace) -> RunConfig:
    options = {key: getattr(args_cli, key) for key in OPTION_KEYS if getattr(args_cli, key, None) is not None}
    if args_cli.command == "simlab":
        # study defaults apply unless overridden
        options["alpha"] = args_cli.alpha
        options["workers"] = args_cli.workers
    return RunConfig.from_args(args_cli, options=options)


def write_output(run: RunConfig, output: CommandOutput, args_cli: argparse.Namespace):
    if output.table is not None and not (run.output or "").endswith(".json"):
        text = dump_table(output.table, run.output)
    else:
        text = dump_json(output.payload, run.output)
    if run.output is None:
        print(text)
    else:
        print(f"[INFO] Results written to: {run.output}", file=sys.stderr)
    if args_cli.histogram is None:
        return
    histogram = output.histogram
    if histogram is None and output.values is not None:
        histogram = histogram_table(output.values, args_cli.bins)
    if histogram is None:
        logger.warning(f"'{run.method}' has no randomization distribution; no histogram written.")
        return
    dump_table(histogram, args_cli.histogram)
    print(f"[INFO] Histogram written to: {args_cli.histogram}", file=sys.stderr)


def parse_and_dispatch(argv: list[str] | None = None) -> int:
    """Run one invocation and return its exit code.

    Exit codes: 0 on success, 2 for structural or parameter errors (argument errors included), 1 otherwise.
    """
    parser = build_parser()
    try:
        args_cli = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code is None else int(e.code)
    logging.basicConfig(
        level=logging.DEBUG if args_cli.verbose else logging.WARNING,
        format="[%(levelname)s] %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        run = resolve(args_cli)
        handler = COMMANDS.get(run.method, COMMANDS.get(run.command))
        logger.debug(f"Dispatching '{run.method}' with {run.to_dict()}")
        write_output(run, handler(run), args_cli)
    except (StructuralError, ParameterError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except Exception as e:
        logger.debug("Unhandled failure", exc_info=True)
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    return 0


def main():
    sys.exit(parse_and_dispatch())


if __name__ == "__main__":
    main()
