"""Pairing of units on their covariates for matched-pair designs."""

from __future__ import annotations

import numpy as np
from collections.abc import Callable
from dataclasses import dataclass
from scipy.spatial.distance import cdist

from ..errors import StructuralError

Matcher = Callable[[np.ndarray], np.ndarray]
"""Maps covariates of shape (n, p) to a (n/2, 2) array of pair members."""


@dataclass(frozen=True)
class Pairing:
    """A perfect matching of ``n`` units into ``n / 2`` pairs."""

    members: np.ndarray
    """(k, 2) unit indices of every pair, pairs ordered along the first covariate coordinate."""
    discrepancy: float
    """Average within-pair covariate distance ``(1/n) sum_j |Z_a - Z_b|``."""

    @property
    def num_pairs(self) -> int:
        return self.members.shape[0]

    @property
    def labels(self) -> np.ndarray:
        """Pair label per unit."""
        labels = np.empty(self.members.size, dtype=np.int64)
        labels[self.members[:, 0]] = np.arange(self.num_pairs)
        labels[self.members[:, 1]] = np.arange(self.num_pairs)
        return labels


def sort_matcher(z: np.ndarray) -> np.ndarray:
    """Sort on the first covariate coordinate and pair adjacent units."""
    order = np.argsort(z[:, 0], kind="stable")
    return order.reshape(-1, 2)


def greedy_matcher(z: np.ndarray) -> np.ndarray:
    """Repeatedly pair the two closest unmatched units (Euclidean distance)."""
    n = z.shape[0]
    distances = cdist(z, z)
    rows, cols = np.triu_indices(n, k=1)
    order = np.argsort(distances[rows, cols], kind="stable")
    matched = np.zeros(n, dtype=bool)
    members = []
    for idx in order:
        i, j = rows[idx], cols[idx]
        if matched[i] or matched[j]:
            continue
        matched[i] = matched[j] = True
        members.append((i, j))
        if len(members) == n // 2:
            break
    return np.asarray(members, dtype=np.intp)


def within_pair_discrepancy(z: np.ndarray, members: np.ndarray) -> float:
    """Return ``(1/n) sum_j |Z_a - Z_b|`` over the pairs."""
    z = np.asarray(z, dtype=float).reshape(members.size, -1)
    gaps = np.linalg.norm(z[members[:, 0]] - z[members[:, 1]], axis=1)
    return float(gaps.sum() / members.size)


def pair_by_covariates(z: np.ndarray, matcher: Matcher | None = None) -> Pairing:
    """Pair units whose covariates are close.

    Scalar covariates are sorted and adjacent units paired. Vector covariates use ``matcher``, by default
    :func:`greedy_matcher`. Within every pair the unit with the smaller first coordinate comes first and the pairs
    are ordered along the first coordinate.

    Args:
        z: Covariates of shape (n,) or (n, p).
        matcher: Matching rule. Defaults to None, in which case the rule above is used.

    Raises:
        StructuralError: When ``n`` is odd or zero.
    """
    z = np.asarray(z, dtype=float)
    n = z.shape[0]
    if n == 0 or n % 2 != 0:
        raise StructuralError(f"Matched pairs require an even, positive number of units, received n={n}.")
    z2 = z.reshape(n, -1)
    if matcher is None:
        matcher = sort_matcher if z2.shape[1] == 1 else greedy_matcher
    members = np.asarray(matcher(z2), dtype=np.intp)
    if members.shape != (n // 2, 2) or not np.array_equal(np.sort(members.reshape(-1)), np.arange(n)):
        raise StructuralError("The matcher did not return a perfect matching of the units.")
    first = z2[:, 0]
    swap = first[members[:, 0]] > first[members[:, 1]]
    members[swap] = members[swap][:, ::-1]
    members = members[np.argsort(first[members].mean(axis=1), kind="stable")]
    return Pairing(members=members, discrepancy=within_pair_discrepancy(z2, members))
