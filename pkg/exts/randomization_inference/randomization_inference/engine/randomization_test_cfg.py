"""Configuration of a randomization test run."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Literal

from ..groups.group_kinds import DEFAULT_ENUMERATION_CAP
from ..utils.parallel import DEFAULT_CHUNK_SIZE

DEFAULT_NUM_SAMPLES = 9999
"""Default number of random group elements drawn in Monte Carlo mode, in addition to the identity."""


@dataclass(kw_only=True)
class RandomizationTestCfg:
    """Configuration for the general randomization-test construction."""

    alpha: float = 0.05
    """Nominal level in (0, 1). Defaults to 0.05."""
    mode: Literal["exact", "mc"] = "exact"
    """Enumerate the whole group ("exact") or sample it ("mc"). Defaults to "exact"."""
    num_samples: int = DEFAULT_NUM_SAMPLES
    """Number of i.i.d. uniform group elements drawn in Monte Carlo mode. Defaults to 9999.

    The identity is always added, so the randomization distribution has ``num_samples + 1`` values.
    """
    seed: int | None = None
    """64-bit seed of the Monte Carlo stream. Defaults to None, in which case a fresh seed is drawn and recorded."""
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP
    """Largest group size accepted in exact mode. Defaults to 10**6."""
    tie_rtol: float = 1e-12
    """Relative tolerance under which two statistic values count as tied. Defaults to 1e-12.

    Mathematically equal values may differ in the last bits after floating-point summation in different orders.
    """
    num_workers: int = 1
    """Number of worker processes used to evaluate the statistic. Defaults to 1 (sequential)."""
    chunk_size: int = DEFAULT_CHUNK_SIZE
    """Number of group elements evaluated per worker call. Defaults to 4096."""

    @property
    def total_elements(self) -> int:
        """Number of values of the Monte Carlo randomization distribution, identity included."""
        return self.num_samples + 1

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)
