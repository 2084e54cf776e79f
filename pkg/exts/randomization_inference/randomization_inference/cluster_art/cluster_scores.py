"""Per-cluster estimates and their scaled deviations from the null value."""

from __future__ import annotations

import dataclasses
import numpy as np
import scipy.linalg
from collections.abc import Sequence

from ..errors import ParameterError, RankDeficiencyError, StructuralError
from ..sample import Sample, group_labels


@dataclasses.dataclass(frozen=True)
class ClusterScores:
    """Scores ``S_j = sqrt(n) (theta_j - theta0)`` of ``q`` clusters."""

    s: np.ndarray
    """Scores of shape (q, d)."""
    theta0: np.ndarray | None = None
    """Null value of shape (d,). Defaults to None."""
    estimates: np.ndarray | None = None
    """Per-cluster estimates of shape (q, d). Defaults to None."""
    labels: np.ndarray | None = None
    """Cluster label of every row. Defaults to None."""
    n: int | None = None
    """Total sample size behind the scaling. Defaults to None."""

    def __post_init__(self):
        s = np.asarray(self.s, dtype=float)
        if s.ndim == 1:
            s = s[:, None]
        if s.ndim != 2:
            raise StructuralError(f"Cluster scores must have shape (q,) or (q, d), received {s.shape}.")
        if s.shape[0] < 2:
            raise StructuralError(f"At least two clusters are required, received q={s.shape[0]}.")
        if not np.all(np.isfinite(s)):
            raise StructuralError("Cluster scores must be finite.")
        object.__setattr__(self, "s", s)

    @property
    def q(self) -> int:
        return self.s.shape[0]

    @property
    def d(self) -> int:
        return self.s.shape[1]

    def scaled(self, factor: float) -> ClusterScores:
        return dataclasses.replace(self, s=self.s * factor)

    def to_sample(self) -> Sample:
        """Layout for the cluster sign-change group: one score vector per index."""
        return Sample(data=self.s)


def cluster_ols(
    y: np.ndarray, x: np.ndarray | None, clusters: np.ndarray, add_intercept: bool = True
) -> tuple[np.ndarray, np.ndarray]:
    """Least-squares coefficients fitted on every cluster separately.

    Args:
        y: Responses of shape (n,).
        x: Regressors of shape (n,) or (n, p). None for an intercept-only model.
        clusters: Cluster label per observation.
        add_intercept: Whether to prepend a column of ones. Defaults to True.

    Returns:
        A tuple of the distinct cluster labels and the (q, p') coefficient matrix.

    Raises:
        RankDeficiencyError: When the design of some cluster does not have full column rank.
    """
    y = np.asarray(y, dtype=float).reshape(-1)
    n = y.shape[0]
    columns = [] if x is None else [np.asarray(x, dtype=float).reshape(n, -1)]
    if add_intercept or x is None:
        columns.insert(0, np.ones((n, 1)))
    design = np.concatenate(columns, axis=1)
    labels, inverse = group_labels(np.asarray(clusters).reshape(-1))
    if inverse.shape[0] != n:
        raise StructuralError(f"Cluster labels have {inverse.shape[0]} entries but there are {n} observations.")
    coefficients = np.empty((len(labels), design.shape[1]))
    for j, label in enumerate(labels):
        rows = inverse == j
        block = design[rows]
        rank = np.linalg.matrix_rank(block)
        if rank < design.shape[1]:
            raise RankDeficiencyError(label, int(rank), design.shape[1])
        coefficients[j], *_ = scipy.linalg.lstsq(block, y[rows])
    return labels, coefficients


def cluster_scores_ols(
    y: np.ndarray,
    x: np.ndarray | None,
    clusters: np.ndarray,
    coefficient: int | Sequence[int] = 0,
    theta0: float | Sequence[float] = 0.0,
    add_intercept: bool = True,
) -> ClusterScores:
    """Scores ``sqrt(n) (theta_j - theta0)`` of per-cluster least-squares coefficients.

    Args:
        y: Responses of shape (n,).
        x: Regressors of shape (n,) or (n, p). None for an intercept-only model.
        clusters: Cluster label per observation.
        coefficient: Index (or indices) of the tested coefficient(s) in the design, the intercept being index 0
            when present. Defaults to 0.
        theta0: Null value(s). Defaults to 0.
        add_intercept: Whether to prepend a column of ones. Defaults to True.
    """
    labels, coefficients = cluster_ols(y, x, clusters, add_intercept)
    index = np.atleast_1d(np.asarray(coefficient, dtype=int))
    if index.min() < 0 or index.max() >= coefficients.shape[1]:
        raise ParameterError(f"Coefficient index {coefficient} is out of range for {coefficients.shape[1]} columns.")
    theta0 = np.broadcast_to(np.asarray(theta0, dtype=float), index.shape).copy()
    estimates = coefficients[:, index]
    n = np.asarray(y).reshape(-1).shape[0]
    return ClusterScores(s=np.sqrt(n) * (estimates - theta0), theta0=theta0, estimates=estimates, labels=labels, n=n)


def time_series_blocks(n: int, q: int) -> np.ndarray:
    """Block label per time index: ``q`` contiguous blocks of ``n // q`` observations, the remainder in the last.

    Raises:
        ParameterError: When ``q < 2`` or ``q > n``.
    """
    if q < 2 or q > n:
        raise ParameterError(f"Time-series blocking requires 2 <= q <= n, received q={q} and n={n}.")
    return np.minimum(np.arange(n) // (n // q), q - 1)
