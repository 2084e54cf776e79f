"""Resolved command-line invocation."""

from __future__ import annotations

import argparse
from dataclasses import dataclass, field

from ..engine.randomization_test import check_alpha
from ..engine.randomization_test_cfg import RandomizationTestCfg
from ..errors import ParameterError, StructuralError
from .cli_args import parse_cols, update_randomization_cfg

DEFAULT_ALPHA = 0.05


@dataclass(kw_only=True)
class RunConfig:
    """Everything needed to reproduce one engine invocation."""

    command: str
    """Top-level command: test, experiment, conformal, cluster or simlab."""
    subcommand: str
    """Subcommand, e.g. "two-sample" or the study id."""
    input: str | None = None
    cols: list[str] = field(default_factory=list)
    alpha: float = DEFAULT_ALPHA
    statistic: str | None = None
    """Statistic identifier, None for the subcommand default."""
    group: str | None = None
    """Group or assignment-scheme identifier, None for the subcommand default."""
    studentize: bool | None = None
    mode: str | None = None
    """"exact", "mc" or None when neither ``--exact`` nor ``--mc`` was given."""
    b: int | None = None
    """Monte Carlo elements including the identity."""
    seed: int | None = None
    output: str | None = None
    options: dict = field(default_factory=dict)
    """Subcommand-specific options."""
    test_cfg: RandomizationTestCfg = field(default_factory=RandomizationTestCfg)

    @property
    def method(self) -> str:
        return f"{self.command} {self.subcommand}"

    def require_cols(self, minimum: int, usage: str) -> list[str]:
        """Check that at least ``minimum`` columns were given.

        Raises:
            StructuralError: When ``--input`` or columns are missing.
        """
        if self.input is None:
            raise StructuralError(f"'{self.method}' requires --input.")
        if len(self.cols) < minimum:
            raise StructuralError(f"'{self.method}' requires --cols {usage}, received {self.cols}.")
        return self.cols

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "input": self.input,
            "cols": list(self.cols),
            "alpha": self.alpha,
            "statistic": self.statistic,
            "group": self.group,
            "studentize": self.studentize,
            "mode": self.mode,
            "b": self.b,
            "seed": self.seed,
            "output": self.output,
            "options": dict(self.options),
            "test_cfg": self.test_cfg.to_dict(),
        }

    @classmethod
    def from_args(cls, args_cli: argparse.Namespace, options: dict | None = None) -> RunConfig:
        """Resolve the parsed arguments.

        Raises:
            ParameterError: When alpha is outside (0, 1), Monte Carlo mode lacks a seed or a randomized decision is
                requested without a seed.
        """
        alpha = DEFAULT_ALPHA if args_cli.alpha is None else args_cli.alpha
        check_alpha(alpha)
        test_cfg = update_randomization_cfg(RandomizationTestCfg(alpha=alpha), args_cli)
        if getattr(args_cli, "randomized", False) and args_cli.seed is None:
            raise ParameterError("--randomized requires --seed for the decision's random draw.")
        mode = "mc" if args_cli.mc is not None else ("exact" if args_cli.exact else None)
        return cls(
            command=args_cli.command,
            subcommand=args_cli.subcommand,
            input=args_cli.input,
            cols=parse_cols(args_cli),
            alpha=alpha,
            statistic=getattr(args_cli, "statistic", None),
            group=getattr(args_cli, "group", None) or getattr(args_cli, "scheme", None),
            studentize=getattr(args_cli, "studentize", None),
            mode=mode,
            b=None if args_cli.mc is None else args_cli.mc + 1,
            seed=args_cli.seed,
            output=args_cli.output,
            options={} if options is None else options,
            test_cfg=test_cfg,
        )
