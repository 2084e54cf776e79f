"""Command-line front end: argument parsing, run configuration and dispatch to the module operations."""

from .cli_args import add_randomization_args, add_statistic_args, update_randomization_cfg
from .commands import COMMANDS, VALID_COMBINATIONS, CommandOutput, build_statistic, check_compatible
from .dispatch import build_parser, main, parse_and_dispatch
from .run_config import RunConfig
