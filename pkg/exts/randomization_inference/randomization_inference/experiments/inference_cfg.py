"""Configuration of the matched-pair statistic."""

from __future__ import annotations

import numpy as np
from collections.abc import Callable
from dataclasses import dataclass
from typing import ClassVar

from ..stats.statistics_cfg import StatisticCfg
from . import paired_difference


@dataclass(kw_only=True)
class PairedDifferenceCfg(StatisticCfg):
    """Configuration for the scaled mean of treated-minus-control pair differences."""

    statistic_id: ClassVar[str] = "paired_difference"

    func: Callable[..., np.ndarray] = paired_difference.paired_difference_batch
    studentize: bool = True
    """Whether to divide by the adjacent-pairs standard deviation estimate. Defaults to True."""
    absolute: bool = True

    def describe(self) -> str:
        return f"{'studentized_' if self.studentize else ''}{self.statistic_id}"
