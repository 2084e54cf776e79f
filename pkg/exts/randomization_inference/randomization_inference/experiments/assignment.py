"""Treatment-assignment schemes.

Every scheme function draws a batch of assignment vectors ``D`` of shape (size, n) given the design (the
structure derived from the covariates) and a generator. Assignments depend on the covariates only.
"""

from __future__ import annotations

import math
import numpy as np
from dataclasses import dataclass
from typing import TYPE_CHECKING

from ..errors import ParameterError, StructuralError
from ..sample import group_labels
from .pairing import Pairing, pair_by_covariates

if TYPE_CHECKING:
    from .assignment_cfg import (
        AssignmentCfg,
        CompleteRandomizationCfg,
        MatchedPairsCfg,
        SimpleRandomCfg,
        StratifiedBlockCfg,
    )
    from .experiment_sample import ExperimentSample


@dataclass(frozen=True)
class Design:
    """Structure of an assignment scheme on ``n`` units."""

    n: int
    """Number of units."""
    strata: np.ndarray | None = None
    """Stratum index per unit (stratified block randomization)."""
    members: np.ndarray | None = None
    """(k, 2) pair members (matched pairs)."""
    pairing: Pairing | None = None
    """The covariate pairing the members come from, when built from covariates."""

    @property
    def pairs(self) -> np.ndarray | None:
        if self.members is None:
            return None
        labels = np.empty(self.n, dtype=np.int64)
        labels[self.members[:, 0]] = np.arange(self.members.shape[0])
        labels[self.members[:, 1]] = np.arange(self.members.shape[0])
        return labels

    @classmethod
    def from_sample(cls, x: ExperimentSample) -> Design:
        """Design recorded on an experiment sample."""
        strata = None if x.strata is None else group_labels(x.strata)[1]
        members = None if x.pairs is None else x.pair_order()
        return cls(n=x.n, strata=strata, members=members)


def stratum_labels(z: np.ndarray) -> np.ndarray:
    """Stratum index per unit from discrete covariates (one stratum per distinct covariate row)."""
    z = np.asarray(z)
    if z.ndim == 1:
        return group_labels(z)[1]
    _, inverse = np.unique(z, axis=0, return_inverse=True)
    return inverse.reshape(-1)


def stratum_treated_count(q: float, stratum_size: int) -> int:
    """Number of treated units ``round(q * n(s))`` of a stratum, halves rounded up."""
    return int(math.floor(q * stratum_size + 0.5))


def make_design(cfg: AssignmentCfg, z: np.ndarray) -> Design:
    """Derive the design of ``cfg`` from the covariates."""
    z = np.asarray(z)
    n = z.shape[0]
    if cfg.scheme_id == "stratified_block":
        strata = stratum_labels(cfg.stratum_fn(z) if cfg.stratum_fn is not None else z)
        return Design(n=n, strata=strata)
    if cfg.scheme_id == "matched_pairs":
        pairing = pair_by_covariates(z, matcher=cfg.matcher)
        return Design(n=n, members=pairing.members, pairing=pairing)
    return Design(n=n)


"""
Scheme functions.
"""


def simple_random(cfg: SimpleRandomCfg, design: Design, rng: np.random.Generator, size: int) -> np.ndarray:
    """Independent Bernoulli(q) treatments."""
    if not 0.0 < cfg.q < 1.0:
        raise ParameterError(f"Simple random sampling requires 0 < q < 1, received q={cfg.q}.")
    return (rng.random((size, design.n)) < cfg.q).astype(np.int8)


def complete_randomization(
    cfg: CompleteRandomizationCfg, design: Design, rng: np.random.Generator, size: int
) -> np.ndarray:
    """Exactly ``m`` treated units chosen uniformly."""
    if not 0 < cfg.m < design.n:
        raise ParameterError(f"Complete randomization requires 0 < m < n, received m={cfg.m} and n={design.n}.")
    base = np.zeros(design.n, dtype=np.int8)
    base[: cfg.m] = 1
    return rng.permuted(np.tile(base, (size, 1)), axis=1)


def stratified_block(cfg: StratifiedBlockCfg, design: Design, rng: np.random.Generator, size: int) -> np.ndarray:
    """Complete randomization with ``round(q * n(s))`` treated units within every stratum."""
    if not 0.0 < cfg.q < 1.0:
        raise ParameterError(f"Stratified block randomization requires 0 < q < 1, received q={cfg.q}.")
    if design.strata is None:
        raise StructuralError("Stratified block randomization requires stratum labels.")
    d = np.zeros((size, design.n), dtype=np.int8)
    for s in np.unique(design.strata):
        members = np.flatnonzero(design.strata == s)
        pattern = np.zeros(members.shape[0], dtype=np.int8)
        pattern[: stratum_treated_count(cfg.q, members.shape[0])] = 1
        d[:, members] = rng.permuted(np.tile(pattern, (size, 1)), axis=1)
    return d


def matched_pairs(cfg: MatchedPairsCfg, design: Design, rng: np.random.Generator, size: int) -> np.ndarray:
    """One treated unit per pair, chosen by a fair coin."""
    if design.members is None:
        raise StructuralError("Matched-pair assignment requires a pairing of the units.")
    first = rng.integers(0, 2, size=(size, design.members.shape[0]), dtype=np.int8)
    d = np.zeros((size, design.n), dtype=np.int8)
    d[:, design.members[:, 0]] = first
    d[:, design.members[:, 1]] = 1 - first
    return d


def draw_assignments(cfg: AssignmentCfg, design: Design, rng: np.random.Generator, size: int) -> np.ndarray:
    """Draw ``size`` independent assignment vectors as an array of shape (size, n)."""
    return np.asarray(cfg.func(cfg, design, rng, size), dtype=np.int8)


def assign(
    cfg: AssignmentCfg, z: np.ndarray, rng: np.random.Generator, design: Design | None = None
) -> np.ndarray:
    """Draw one treatment vector for units with covariates ``z``.

    Args:
        cfg: The assignment scheme.
        z: Covariates of shape (n,) or (n, p).
        rng: Random generator.
        design: Pre-computed design. Defaults to None, in which case it is derived from ``z``.

    Raises:
        ParameterError: When the scheme counts are infeasible.
        StructuralError: When the covariates do not admit the design (e.g. odd ``n`` for pairs).
    """
    design = make_design(cfg, z) if design is None else design
    return draw_assignments(cfg, design, rng, 1)[0]


def check_conforms(cfg: AssignmentCfg, x: ExperimentSample):
    """Check that the observed treatments satisfy the counting constraints of the scheme.

    Raises:
        StructuralError: When the sample does not conform to the scheme.
    """
    if cfg.scheme_id == "complete":
        if x.num_treated != cfg.m:
            raise StructuralError(f"Complete randomization with m={cfg.m} but the sample has {x.num_treated} treated.")
    elif cfg.scheme_id == "stratified_block":
        if x.strata is None:
            raise StructuralError("Stratified block randomization requires stratum labels on the sample.")
        _, inverse = group_labels(x.strata)
        for s in np.unique(inverse):
            members = inverse == s
            expected = stratum_treated_count(cfg.q, int(members.sum()))
            if int(x.d[members].sum()) != expected:
                raise StructuralError(
                    f"Stratum {s} has {int(x.d[members].sum())} treated units but the design fixes {expected}."
                )
    elif cfg.scheme_id == "matched_pairs":
        members = x.pair_order()
        if not np.all(x.d[members].sum(axis=1) == 1):
            raise StructuralError("Every pair of a matched-pair sample must contain exactly one treated unit.")
