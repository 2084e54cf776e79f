"""The observed sample on which groups act and statistics are evaluated."""

from __future__ import annotations

import dataclasses
import numpy as np
from collections.abc import Sequence

from .errors import StructuralError


@dataclasses.dataclass(frozen=True, eq=False)
class Sample:
    """An ordered collection of observations.

    Transformation groups act on :attr:`data` along its first axis. Everything else stays attached to the
    index positions and is never moved by a group element. The common layouts are:

    * one-sample and time series: ``data`` holds the observations.
    * two-sample and k-sample: ``data`` holds the pooled observations and ``fixed`` the sample labels.
    * correlation: ``data`` holds the second coordinate and ``fixed`` the first.
    * randomized experiments: ``data`` holds the treatment indicators and ``fixed`` the outcomes.
    * cluster scores: ``data`` holds one score vector per cluster.
    """

    data: np.ndarray
    """Coordinates acted on by the group. Shape is (n,) or (n, d)."""
    fixed: np.ndarray | None = None
    """Coordinates aligned with :attr:`data` that the group leaves in place. Defaults to None."""
    covariates: np.ndarray | None = None
    """Covariates aligned with :attr:`data`. Defaults to None."""
    strata: np.ndarray | None = None
    """Integer stratum label per index. Defaults to None."""
    pairs: np.ndarray | None = None
    """Integer pair label per index, each label used exactly twice. Defaults to None."""
    clusters: np.ndarray | None = None
    """Integer cluster label per index. Defaults to None."""

    def __post_init__(self):
        data = np.asarray(self.data)
        if data.ndim not in (1, 2):
            raise StructuralError(f"Sample data must be one- or two-dimensional, received shape {data.shape}.")
        if data.shape[0] < 1:
            raise StructuralError("Sample data must contain at least one observation.")
        object.__setattr__(self, "data", data)
        for name in ("fixed", "covariates", "strata", "pairs", "clusters"):
            value = getattr(self, name)
            if value is None:
                continue
            value = np.asarray(value)
            if value.shape[0] != data.shape[0]:
                raise StructuralError(
                    f"Length mismatch: '{name}' has {value.shape[0]} entries but the sample has {data.shape[0]}."
                )
            object.__setattr__(self, name, value)

    @property
    def n(self) -> int:
        """Number of observations."""
        return self.data.shape[0]

    def with_data(self, data: np.ndarray) -> Sample:
        """Return a copy with the acted-on coordinates replaced."""
        return dataclasses.replace(self, data=np.asarray(data))

    """
    Layout constructors.
    """

    @classmethod
    def one_sample(cls, x: Sequence[float] | np.ndarray) -> Sample:
        return cls(data=np.asarray(x, dtype=float))

    @classmethod
    def two_sample(cls, x: Sequence | np.ndarray, y: Sequence | np.ndarray) -> Sample:
        """Pool two samples. The label is 1 for positions of ``x`` and 0 for positions of ``y``."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if x.shape[0] == 0 or y.shape[0] == 0:
            raise StructuralError(f"Both samples must be non-empty, received sizes {x.shape[0]} and {y.shape[0]}.")
        if x.shape[1:] != y.shape[1:]:
            raise StructuralError(f"Observation shapes differ between samples: {x.shape[1:]} != {y.shape[1:]}.")
        labels = np.concatenate([np.ones(x.shape[0], dtype=np.int64), np.zeros(y.shape[0], dtype=np.int64)])
        return cls(data=np.concatenate([x, y], axis=0), fixed=labels)

    @classmethod
    def k_sample(cls, samples: Sequence[Sequence[float] | np.ndarray]) -> Sample:
        """Pool ``k`` samples with labels ``0, ..., k - 1``."""
        arrays = [np.asarray(s, dtype=float) for s in samples]
        if len(arrays) < 2:
            raise StructuralError(f"At least two samples are required, received {len(arrays)}.")
        if any(a.shape[0] == 0 for a in arrays):
            raise StructuralError("Every sample must be non-empty.")
        labels = np.concatenate([np.full(a.shape[0], i, dtype=np.int64) for i, a in enumerate(arrays)])
        return cls(data=np.concatenate(arrays, axis=0), fixed=labels)

    @classmethod
    def bivariate(cls, x: Sequence[float] | np.ndarray, y: Sequence[float] | np.ndarray) -> Sample:
        """Pair two coordinates for association tests. Permutations act on ``y``."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if x.shape != y.shape or x.ndim != 1:
            raise StructuralError(f"Paired coordinates must be equal-length vectors, received {x.shape} and {y.shape}.")
        return cls(data=y, fixed=x)


def group_labels(labels: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Return the distinct labels and the position of every index in them."""
    uniques, inverse = np.unique(np.asarray(labels), return_inverse=True)
    return uniques, inverse.reshape(-1)


def pair_members(pairs: np.ndarray) -> np.ndarray:
    """Return a (k, 2) array with the two indices of every pair, ordered by pair label.

    Raises:
        StructuralError: When some pair label is not used exactly twice.
    """
    uniques, inverse = group_labels(pairs)
    counts = np.bincount(inverse, minlength=len(uniques))
    bad = np.flatnonzero(counts != 2)
    if len(bad) > 0:
        raise StructuralError(
            f"Every pair must have exactly two members; pair '{uniques[bad[0]]}' has {counts[bad[0]]}."
        )
    order = np.argsort(inverse, kind="stable")
    return order.reshape(-1, 2)
