"""Finite transformation groups acting on samples.

Two payload encodings are used:

* permutation kinds store an index array ``pi`` and act as ``x -> x[pi]``;
* sign kinds store an ``int8`` vector of +1/-1 entries (one per index, or one per cluster) and act by
  componentwise multiplication.

Enumeration always starts with the identity element. Sampling draws elements uniformly from the group and is
deterministic given the generator.
"""

from __future__ import annotations

import itertools
import math
import numpy as np
from abc import ABC, abstractmethod
from collections.abc import Iterator
from dataclasses import dataclass
from typing import ClassVar

from ..errors import EnumerationCapError, StructuralError
from ..sample import Sample, group_labels, pair_members

DEFAULT_ENUMERATION_CAP = 10**6
"""Maximum group size accepted for exact enumeration."""


class GroupKind(ABC):
    """Base class of the finite groups.

    Group values are immutable after construction and can be shared between workers.
    """

    payload_dtype: ClassVar[type] = np.intp
    """Numpy dtype of the payload arrays."""

    def __init__(self, n: int):
        if n < 1:
            raise StructuralError(f"A group must act on at least one index, received n={n}.")
        self._n = int(n)

    @property
    def n(self) -> int:
        """Number of indices of the acted-on coordinate."""
        return self._n

    @property
    def payload_length(self) -> int:
        """Length of a payload vector."""
        return self._n

    @property
    def name(self) -> str:
        return type(self).__name__

    def describe(self) -> str:
        return f"{self.name}({self.payload_length})"

    """
    Operations.
    """

    @abstractmethod
    def element_count(self) -> int:
        """Return the exact number of group elements M."""
        raise NotImplementedError

    @abstractmethod
    def identity_payload(self) -> np.ndarray:
        """Return the payload of the identity element."""
        raise NotImplementedError

    @abstractmethod
    def sample_payloads(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Draw ``size`` i.i.d. uniform payloads as an array of shape (size, payload_length)."""
        raise NotImplementedError

    @abstractmethod
    def _iter_payloads(self) -> Iterator[np.ndarray]:
        raise NotImplementedError

    @abstractmethod
    def apply_batch(self, payloads: np.ndarray, data: np.ndarray) -> np.ndarray:
        """Apply a batch of payloads to ``data``. The output has shape (batch,) + data.shape."""
        raise NotImplementedError

    @abstractmethod
    def compose_payloads(self, first: np.ndarray, second: np.ndarray) -> np.ndarray:
        """Payload of the element acting as ``first`` after ``second``."""
        raise NotImplementedError

    def enumerate(self, cap: int = DEFAULT_ENUMERATION_CAP) -> Iterator[GroupElement]:
        """Yield every element exactly once, beginning with the identity.

        Raises:
            EnumerationCapError: When the group has more than ``cap`` elements.
        """
        count = self.element_count()
        if count > cap:
            raise EnumerationCapError(count, cap)
        return (GroupElement(self, payload) for payload in self._iter_payloads())

    def enumerate_payloads(self, cap: int = DEFAULT_ENUMERATION_CAP) -> np.ndarray:
        """Materialize all payloads as an array of shape (M, payload_length), identity first.

        Raises:
            EnumerationCapError: When the group has more than ``cap`` elements.
        """
        count = self.element_count()
        if count > cap:
            raise EnumerationCapError(count, cap)
        payloads = np.empty((count, self.payload_length), dtype=self.payload_dtype)
        for i, payload in enumerate(self._iter_payloads()):
            payloads[i] = payload
        return payloads

    def sample_uniform(self, rng: np.random.Generator) -> GroupElement:
        """Draw one element uniformly at random."""
        return GroupElement(self, self.sample_payloads(rng, 1)[0])

    def identity(self) -> GroupElement:
        return GroupElement(self, self.identity_payload())

    def apply(self, payload: np.ndarray, x: Sample) -> Sample:
        """Apply one payload to a sample. The input sample is not modified.

        Raises:
            StructuralError: When the sample length does not match the group.
        """
        self.check_sample(x)
        return x.with_data(self.apply_batch(np.asarray(payload)[None], x.data)[0])

    def check_sample(self, x: Sample):
        if x.n != self._n:
            raise StructuralError(f"{self.describe()} acts on {self._n} indices but the sample has {x.n}.")

    def check_payload(self, payload: np.ndarray):
        if np.asarray(payload).shape != (self.payload_length,):
            raise StructuralError(
                f"Payload of shape {np.asarray(payload).shape} does not match {self.describe()}."
            )


@dataclass(frozen=True, eq=False)
class GroupElement:
    """A group element: its kind and its payload."""

    kind: GroupKind
    """The group the element belongs to."""
    payload: np.ndarray
    """Permutation index array or sign vector."""

    def __post_init__(self):
        self.kind.check_payload(self.payload)

    def apply(self, x: Sample) -> Sample:
        return self.kind.apply(self.payload, x)

    def compose(self, other: GroupElement) -> GroupElement:
        """Return the element acting as ``self`` after ``other``."""
        if other.kind is not self.kind:
            raise StructuralError("Cannot compose elements of different groups.")
        return GroupElement(self.kind, self.kind.compose_payloads(self.payload, other.payload))

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.payload, self.kind.identity_payload()))


"""
Permutation kinds.
"""


class PermutationGroup(GroupKind):
    """Base class of groups acting by index permutations ``x -> x[pi]``."""

    def identity_payload(self) -> np.ndarray:
        return np.arange(self._n, dtype=self.payload_dtype)

    def apply_batch(self, payloads: np.ndarray, data: np.ndarray) -> np.ndarray:
        data = np.asarray(data)
        if data.shape[0] != self._n:
            raise StructuralError(f"{self.describe()} acts on {self._n} indices but the data has {data.shape[0]}.")
        return data[np.asarray(payloads)]

    def compose_payloads(self, first: np.ndarray, second: np.ndarray) -> np.ndarray:
        # (x[second])[first] == x[second[first]]
        return np.asarray(second)[np.asarray(first)]

    def check_payload(self, payload: np.ndarray):
        super().check_payload(payload)
        if not np.array_equal(np.sort(payload), np.arange(self._n)):
            raise StructuralError(f"Payload is not a permutation of {self._n} indices.")


class FullPermutation(PermutationGroup):
    """All ``N!`` permutations of ``N`` indices."""

    def element_count(self) -> int:
        return math.factorial(self._n)

    def sample_payloads(self, rng: np.random.Generator, size: int) -> np.ndarray:
        base = np.tile(np.arange(self._n, dtype=self.payload_dtype), (size, 1))
        return rng.permuted(base, axis=1)

    def _iter_payloads(self) -> Iterator[np.ndarray]:
        for perm in itertools.permutations(range(self._n)):
            yield np.asarray(perm, dtype=self.payload_dtype)

    @classmethod
    def from_sample(cls, sample: Sample) -> FullPermutation:
        return cls(sample.n)


class StratifiedPermutation(PermutationGroup):
    """Permutations that only move indices within a common stratum."""

    def __init__(self, strata: np.ndarray):
        strata = np.asarray(strata).reshape(-1)
        super().__init__(strata.shape[0])
        self._strata = strata
        self._labels, inverse = group_labels(strata)
        self._members = [np.flatnonzero(inverse == s) for s in range(len(self._labels))]

    @property
    def strata(self) -> np.ndarray:
        return self._strata

    @property
    def stratum_sizes(self) -> list[int]:
        return [len(m) for m in self._members]

    def describe(self) -> str:
        return f"{self.name}(sizes={self.stratum_sizes})"

    def element_count(self) -> int:
        return math.prod(math.factorial(len(m)) for m in self._members)

    def sample_payloads(self, rng: np.random.Generator, size: int) -> np.ndarray:
        payloads = np.broadcast_to(self.identity_payload(), (size, self._n)).copy()
        for members in self._members:
            if len(members) > 1:
                payloads[:, members] = rng.permuted(np.tile(members, (size, 1)), axis=1)
        return payloads

    def _iter_payloads(self) -> Iterator[np.ndarray]:
        per_stratum = [itertools.permutations(members.tolist()) for members in self._members]
        for combination in itertools.product(*per_stratum):
            payload = np.empty(self._n, dtype=self.payload_dtype)
            for members, perm in zip(self._members, combination):
                payload[members] = perm
            yield payload

    def check_payload(self, payload: np.ndarray):
        super().check_payload(payload)
        if not np.array_equal(self._strata[np.asarray(payload)], self._strata):
            raise StructuralError("Payload moves an index across a stratum boundary.")

    @classmethod
    def from_sample(cls, sample: Sample) -> StratifiedPermutation:
        if sample.strata is None:
            raise StructuralError("StratifiedPermutation requires stratum labels on the sample.")
        return cls(sample.strata)


class PairSwap(PermutationGroup):
    """Independent swaps of the two members of every pair (``2^k`` elements for ``k`` pairs)."""

    def __init__(self, pairs: np.ndarray):
        pairs = np.asarray(pairs).reshape(-1)
        super().__init__(pairs.shape[0])
        self._pairs = pairs
        self._members = pair_members(pairs)

    @property
    def num_pairs(self) -> int:
        return self._members.shape[0]

    @property
    def members(self) -> np.ndarray:
        """(k, 2) array of the indices in every pair."""
        return self._members

    def describe(self) -> str:
        return f"{self.name}({self.num_pairs})"

    def element_count(self) -> int:
        return 2**self.num_pairs

    def payloads_from_swaps(self, swaps: np.ndarray) -> np.ndarray:
        """Convert swap indicators of shape (batch, k) into permutation payloads."""
        swaps = np.asarray(swaps, dtype=bool)
        payloads = np.broadcast_to(self.identity_payload(), (swaps.shape[0], self._n)).copy()
        first, second = self._members[:, 0], self._members[:, 1]
        payloads[:, first] = np.where(swaps, second, first)
        payloads[:, second] = np.where(swaps, first, second)
        return payloads

    def sample_payloads(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return self.payloads_from_swaps(rng.integers(0, 2, size=(size, self.num_pairs), dtype=np.int8))

    def _iter_payloads(self) -> Iterator[np.ndarray]:
        for swaps in itertools.product((False, True), repeat=self.num_pairs):
            yield self.payloads_from_swaps(np.asarray(swaps)[None])[0]

    def check_payload(self, payload: np.ndarray):
        super().check_payload(payload)
        if not np.array_equal(self._pairs[np.asarray(payload)], self._pairs):
            raise StructuralError("Payload moves an index across a pair boundary.")

    @classmethod
    def from_sample(cls, sample: Sample) -> PairSwap:
        if sample.pairs is None:
            raise StructuralError("PairSwap requires pair labels on the sample.")
        return cls(sample.pairs)


"""
Sign kinds.
"""


class SignGroup(GroupKind):
    """Base class of groups acting by sign changes."""

    payload_dtype = np.int8

    def element_count(self) -> int:
        return 2**self.payload_length

    def identity_payload(self) -> np.ndarray:
        return np.ones(self.payload_length, dtype=self.payload_dtype)

    def sample_payloads(self, rng: np.random.Generator, size: int) -> np.ndarray:
        bits = rng.integers(0, 2, size=(size, self.payload_length), dtype=np.int8)
        return (1 - 2 * bits).astype(self.payload_dtype)

    def _iter_payloads(self) -> Iterator[np.ndarray]:
        for signs in itertools.product((1, -1), repeat=self.payload_length):
            yield np.asarray(signs, dtype=self.payload_dtype)

    def compose_payloads(self, first: np.ndarray, second: np.ndarray) -> np.ndarray:
        return (np.asarray(first) * np.asarray(second)).astype(self.payload_dtype)

    def check_payload(self, payload: np.ndarray):
        super().check_payload(payload)
        if not np.all(np.abs(np.asarray(payload)) == 1):
            raise StructuralError("Sign payload entries must be +1 or -1.")

    def _index_signs(self, payloads: np.ndarray) -> np.ndarray:
        return np.asarray(payloads)

    def apply_batch(self, payloads: np.ndarray, data: np.ndarray) -> np.ndarray:
        data = np.asarray(data)
        if data.shape[0] != self._n:
            raise StructuralError(f"{self.describe()} acts on {self._n} indices but the data has {data.shape[0]}.")
        signs = self._index_signs(payloads).astype(np.result_type(data.dtype, np.float64))
        return signs.reshape(signs.shape + (1,) * (data.ndim - 1)) * data[None]


class SignChange(SignGroup):
    """Independent sign changes of every observation (``2^n`` elements)."""

    @classmethod
    def from_sample(cls, sample: Sample) -> SignChange:
        return cls(sample.n)


class ClusterSignChange(SignGroup):
    """One common sign per cluster (``2^q`` elements).

    With ``clusters=None`` every index is its own cluster, which is the layout of per-cluster score vectors.
    """

    def __init__(self, q: int | None = None, clusters: np.ndarray | None = None):
        if clusters is None:
            if q is None:
                raise StructuralError("ClusterSignChange requires the number of clusters or cluster labels.")
            clusters = np.arange(q)
        clusters = np.asarray(clusters).reshape(-1)
        super().__init__(clusters.shape[0])
        self._labels, self._inverse = group_labels(clusters)
        self._clusters = clusters
        if q is not None and q != len(self._labels):
            raise StructuralError(f"Expected {q} clusters but the labels define {len(self._labels)}.")

    @property
    def q(self) -> int:
        return len(self._labels)

    @property
    def clusters(self) -> np.ndarray:
        return self._clusters

    @property
    def payload_length(self) -> int:
        return self.q

    def _index_signs(self, payloads: np.ndarray) -> np.ndarray:
        return np.asarray(payloads)[:, self._inverse]

    @classmethod
    def from_sample(cls, sample: Sample) -> ClusterSignChange:
        if sample.clusters is None:
            return cls(q=sample.n)
        return cls(clusters=sample.clusters)


def element_count(kind: GroupKind) -> int:
    """Return the exact number of elements of ``kind`` as a Python integer."""
    return kind.element_count()


def apply(element: GroupElement, x: Sample) -> Sample:
    """Apply a group element to a sample."""
    return element.apply(x)


def sample_uniform(kind: GroupKind, rng: np.random.Generator) -> GroupElement:
    """Draw one element of ``kind`` uniformly at random."""
    return kind.sample_uniform(rng)


def enumerate_group(kind: GroupKind, cap: int = DEFAULT_ENUMERATION_CAP) -> Iterator[GroupElement]:
    """Yield every element of ``kind`` once, identity first."""
    return kind.enumerate(cap)
