"""Seeded random streams.

All randomness flows through :class:`numpy.random.Generator` objects backed by the splittable ``PCG64`` bit
generator. Independent streams are obtained with :meth:`numpy.random.SeedSequence.spawn`, so a parallel run draws
exactly the same numbers as a sequential one.
"""

from __future__ import annotations

import numpy as np

from ..errors import ParameterError

BIT_GENERATOR_NAME = "PCG64"
"""Name of the bit generator recorded in every Monte Carlo result."""

SEED_BITS = 64


def resolve_seed(seed: int | None) -> int:
    """Return ``seed`` or, when it is None, a fresh 64-bit seed drawn from OS entropy."""
    if seed is None:
        return int(np.random.SeedSequence().generate_state(1, dtype=np.uint64)[0])
    if seed < 0 or seed >= 2**SEED_BITS:
        raise ParameterError(f"Seed must be a non-negative {SEED_BITS}-bit integer, received {seed}.")
    return int(seed)


def make_rng(seed: int | np.random.SeedSequence) -> np.random.Generator:
    """Create a generator from a seed or a seed sequence."""
    seed_seq = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    return np.random.Generator(np.random.PCG64(seed_seq))


def spawn_rngs(seed: int, num_streams: int) -> list[np.random.Generator]:
    """Create ``num_streams`` independent generators from one seed."""
    return [make_rng(child) for child in np.random.SeedSequence(seed).spawn(num_streams)]


def draw_seed(rng: np.random.Generator) -> int:
    """Draw a child 64-bit seed from a generator."""
    return int(rng.integers(0, 2**63, dtype=np.int64))
