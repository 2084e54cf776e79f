from __future__ import annotations

import argparse
import dataclasses

from ..engine.randomization_test_cfg import RandomizationTestCfg
from ..errors import ParameterError


def add_randomization_args(parser: argparse.ArgumentParser):
    """Add the arguments shared by every subcommand to the parser.

    Args:
        parser: The parser to add the arguments to.
    """
    # create a new argument group
    arg_group = parser.add_argument_group("randomization", description="Arguments of the randomization test.")
    # -- level and mode
    arg_group.add_argument("--alpha", type=float, default=None, help="Nominal level in (0, 1). Defaults to 0.05.")
    mode = arg_group.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", default=False, help="Enumerate every group element.")
    mode.add_argument(
        "--mc", type=int, default=None, metavar="B", help="Monte Carlo mode with B group elements besides the identity."
    )
    arg_group.add_argument("--seed", type=int, default=None, help="64-bit seed. Required in Monte Carlo mode.")
    arg_group.add_argument("--workers", type=int, default=None, help="Number of worker processes (-1: all cores).")
    arg_group.add_argument("--cap", type=int, default=None, help="Largest group size enumerated in exact mode.")
    arg_group.add_argument(
        "--randomized", action="store_true", default=False, help="Report the randomized decision (needs --seed)."
    )
    # -- data arguments
    io_group = parser.add_argument_group("io", description="Input and output files.")
    io_group.add_argument("--input", type=str, default=None, help="UTF-8 CSV input file with a header row.")
    io_group.add_argument("--output", type=str, default=None, help="Output file. Defaults to standard output.")
    io_group.add_argument("--cols", type=str, default=None, help="Comma-separated column names of the input file.")
    io_group.add_argument(
        "--histogram", type=str, default=None, help="CSV file for histogram bins of the randomization distribution."
    )
    io_group.add_argument("--bins", type=int, default=40, help="Number of histogram bins.")
    io_group.add_argument("-v", "--verbose", action="store_true", default=False, help="Log debug messages.")


def add_statistic_args(parser: argparse.ArgumentParser, group: bool = True):
    """Add the arguments selecting the statistic and (optionally) the group to the parser."""
    arg_group = parser.add_argument_group("statistic", description="Arguments of the test statistic.")
    arg_group.add_argument("--statistic", type=str, default=None, help="Statistic identifier.")
    if group:
        arg_group.add_argument("--group", type=str, default=None, help="Group identifier.")
    arg_group.add_argument(
        "--studentize",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="Whether to studentize the statistic.",
    )
    arg_group.add_argument(
        "--one-sided", dest="one_sided", action="store_true", default=False, help="Use the signed statistic."
    )


def parse_cols(args_cli: argparse.Namespace) -> list[str]:
    """Column names of ``--cols``, empty when the flag is absent."""
    if not args_cli.cols:
        return []
    return [c.strip() for c in args_cli.cols.split(",") if c.strip()]


def update_randomization_cfg(cfg: RandomizationTestCfg, args_cli: argparse.Namespace) -> RandomizationTestCfg:
    """Update the run configuration based on inputs.

    Args:
        cfg: The run configuration.
        args_cli: The command line arguments.

    Returns:
        The updated run configuration.

    Raises:
        ParameterError: When Monte Carlo mode is requested without a seed or with ``B < 1``.
    """
    overrides = {}
    # override the default configuration with CLI arguments
    if args_cli.alpha is not None:
        overrides["alpha"] = args_cli.alpha
    if args_cli.exact:
        overrides["mode"] = "exact"
    if args_cli.mc is not None:
        if args_cli.mc < 1:
            raise ParameterError(f"--mc requires B >= 1 sampled group elements, received {args_cli.mc}.")
        if args_cli.seed is None:
            raise ParameterError("--seed is required in Monte Carlo mode so that the result can be reproduced.")
        overrides["mode"] = "mc"
        overrides["num_samples"] = args_cli.mc
    if args_cli.seed is not None:
        overrides["seed"] = args_cli.seed
    if args_cli.workers is not None:
        overrides["num_workers"] = args_cli.workers
    if args_cli.cap is not None:
        overrides["enumeration_cap"] = args_cli.cap
    return dataclasses.replace(cfg, **overrides)
