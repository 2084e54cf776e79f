"""Observed data of a randomized experiment."""

from __future__ import annotations

import dataclasses
import numpy as np

from ..errors import StructuralError
from ..sample import Sample, group_labels, pair_members


@dataclasses.dataclass(frozen=True, eq=False)
class ExperimentSample:
    """Outcomes, treatment indicators and covariates of ``n`` units.

    Optional stratum and pair labels record the design the treatments were drawn under.
    """

    y: np.ndarray
    """Outcomes. Shape is (n,)."""
    d: np.ndarray
    """Treatment indicators in {0, 1}. Shape is (n,)."""
    z: np.ndarray | None = None
    """Covariates. Shape is (n,) or (n, p). Defaults to None."""
    strata: np.ndarray | None = None
    """Stratum label per unit. Defaults to None."""
    pairs: np.ndarray | None = None
    """Pair label per unit, each label used exactly twice. Defaults to None."""

    def __post_init__(self):
        y = np.asarray(self.y, dtype=float).reshape(-1)
        d = np.asarray(self.d)
        if d.ndim != 1 or d.shape[0] != y.shape[0]:
            raise StructuralError(f"Treatments of shape {d.shape} do not match {y.shape[0]} outcomes.")
        if not np.all((d == 0) | (d == 1)):
            raise StructuralError("Treatment indicators must be 0 or 1.")
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "d", d.astype(np.int8))
        for name in ("z", "strata", "pairs"):
            value = getattr(self, name)
            if value is None:
                continue
            value = np.asarray(value)
            if value.shape[0] != y.shape[0]:
                raise StructuralError(
                    f"Length mismatch: '{name}' has {value.shape[0]} entries but there are {y.shape[0]} units."
                )
            object.__setattr__(self, name, value)

    @property
    def n(self) -> int:
        return self.y.shape[0]

    @property
    def num_treated(self) -> int:
        return int(self.d.sum())

    def shifted(self, theta0: float) -> ExperimentSample:
        """Return a copy with outcomes ``Y - theta0 * D``."""
        return dataclasses.replace(self, y=self.y - theta0 * self.d)

    def with_treatments(self, d: np.ndarray) -> ExperimentSample:
        return dataclasses.replace(self, d=np.asarray(d))

    def pair_order(self) -> np.ndarray:
        """(k, 2) pair members ordered by the first covariate coordinate of the pair (pair label without covariates).

        Raises:
            StructuralError: When the sample carries no pair labels or a pair does not have two members.
        """
        if self.pairs is None:
            raise StructuralError("The sample carries no pair labels.")
        members = pair_members(self.pairs)
        if self.z is None:
            return members
        z = np.asarray(self.z, dtype=float).reshape(self.n, -1)[:, 0]
        centers = z[members].mean(axis=1)
        return members[np.argsort(centers, kind="stable")]

    def to_sample(self) -> Sample:
        """Layout for randomization tests: the groups act on the treatments and the outcomes stay in place.

        Pair labels are renumbered ``0, ..., k - 1`` in covariate order.
        """
        pairs = None
        if self.pairs is not None:
            members = self.pair_order()
            pairs = np.empty(self.n, dtype=np.int64)
            pairs[members[:, 0]] = np.arange(members.shape[0])
            pairs[members[:, 1]] = np.arange(members.shape[0])
        strata = None if self.strata is None else group_labels(self.strata)[1]
        return Sample(data=self.d, fixed=self.y, covariates=self.z, strata=strata, pairs=pairs)
