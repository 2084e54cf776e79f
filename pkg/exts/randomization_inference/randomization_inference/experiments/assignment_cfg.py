"""Configuration classes of the treatment-assignment schemes."""

from __future__ import annotations

import dataclasses
import numpy as np
from collections.abc import Callable
from dataclasses import MISSING, dataclass
from typing import ClassVar

from . import assignment
from .pairing import Matcher


@dataclass(kw_only=True)
class AssignmentCfg:
    """Base configuration of an assignment scheme."""

    scheme_id: ClassVar[str] = "scheme"
    """Identifier reported in results."""

    func: Callable[..., np.ndarray] = MISSING
    """Scheme function ``func(cfg, design, rng, size) -> (size, n)`` treatments."""

    def to_dict(self) -> dict:
        return {"scheme_id": self.scheme_id, **dataclasses.asdict(self)}


@dataclass(kw_only=True)
class SimpleRandomCfg(AssignmentCfg):
    """Configuration for independent Bernoulli(q) assignment."""

    scheme_id: ClassVar[str] = "simple_random"

    func: Callable[..., np.ndarray] = assignment.simple_random
    q: float = 0.5
    """Treatment probability in (0, 1). Defaults to 0.5."""


@dataclass(kw_only=True)
class CompleteRandomizationCfg(AssignmentCfg):
    """Configuration for complete randomization of ``m`` treated units."""

    scheme_id: ClassVar[str] = "complete"

    func: Callable[..., np.ndarray] = assignment.complete_randomization
    m: int = MISSING
    """Number of treated units, ``0 < m < n``."""


@dataclass(kw_only=True)
class StratifiedBlockCfg(AssignmentCfg):
    """Configuration for stratified block randomization."""

    scheme_id: ClassVar[str] = "stratified_block"

    func: Callable[..., np.ndarray] = assignment.stratified_block
    q: float = 0.5
    """Target treated fraction in every stratum. Stratum ``s`` gets ``round(q * n(s))`` treated units."""
    stratum_fn: Callable[[np.ndarray], np.ndarray] | None = None
    """Map from covariates to stratum labels. Defaults to None, in which case the covariates are the labels."""


@dataclass(kw_only=True)
class MatchedPairsCfg(AssignmentCfg):
    """Configuration for matched-pair designs."""

    scheme_id: ClassVar[str] = "matched_pairs"

    func: Callable[..., np.ndarray] = assignment.matched_pairs
    matcher: Matcher | None = None
    """Pairing rule. Defaults to None: sorting for scalar covariates, greedy matching for vectors."""


ASSIGNMENT_CFGS: dict[str, type[AssignmentCfg]] = {
    cfg.scheme_id: cfg for cfg in (SimpleRandomCfg, CompleteRandomizationCfg, StratifiedBlockCfg, MatchedPairsCfg)
}
"""Scheme identifiers used by the command-line front end."""
