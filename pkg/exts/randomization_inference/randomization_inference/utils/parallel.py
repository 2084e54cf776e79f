"""Order-preserving chunked parallel map."""

from __future__ import annotations

import numpy as np
import psutil
from collections.abc import Callable, Sequence
from joblib import Parallel, delayed
from tqdm import tqdm

from ..errors import ParameterError

DEFAULT_CHUNK_SIZE = 4096
"""Number of items evaluated per worker call."""


def resolve_num_workers(num_workers: int) -> int:
    """Resolve a worker count. Negative values mean "all physical cores" like joblib's ``n_jobs=-1``."""
    if num_workers == 0:
        raise ParameterError("The number of workers must be non-zero.")
    if num_workers < 0:
        cores = psutil.cpu_count(logical=False) or psutil.cpu_count() or 1
        return max(1, cores + 1 + num_workers)
    return num_workers


def split_chunks(num_items: int, chunk_size: int) -> list[slice]:
    """Split ``range(num_items)`` into contiguous slices of at most ``chunk_size`` items."""
    return [slice(start, min(start + chunk_size, num_items)) for start in range(0, num_items, chunk_size)]


def chunked_map(
    func: Callable[[np.ndarray], np.ndarray],
    items: np.ndarray | Sequence,
    num_workers: int = 1,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
) -> np.ndarray:
    """Apply ``func`` to contiguous chunks of ``items`` and concatenate the results in input order.

    The chunk boundaries depend only on ``chunk_size``, never on the number of workers, so the output is
    bit-identical for any worker count.

    Args:
        func: Function mapping a chunk of items to a 1D array with one entry per item.
        items: Array (or sequence) indexed along its first axis.
        num_workers: Number of worker processes. Defaults to 1 (sequential).
        chunk_size: Items per chunk. Defaults to :data:`DEFAULT_CHUNK_SIZE`.

    Returns:
        The concatenated results.
    """
    num_items = len(items)
    if num_items == 0:
        return np.empty(0, dtype=float)
    chunks = split_chunks(num_items, chunk_size)
    workers = min(resolve_num_workers(num_workers), len(chunks))
    if workers == 1:
        outputs = [func(items[chunk]) for chunk in chunks]
    else:
        outputs = Parallel(n_jobs=workers, backend="loky")(delayed(func)(items[chunk]) for chunk in chunks)
    return np.concatenate([np.asarray(out, dtype=float).reshape(-1) for out in outputs])


def parallel_replications(
    func: Callable[..., object],
    arguments: Sequence,
    num_workers: int = 1,
    progress: bool = False,
    description: str | None = None,
) -> list:
    """Run ``func(argument)`` for every argument and return the results in argument order.

    Args:
        func: The replication function.
        arguments: One argument per replication, e.g. pre-split random streams.
        num_workers: Number of worker processes. Defaults to 1 (sequential).
        progress: Whether to show a ``tqdm`` progress bar. Defaults to False.
        description: Progress bar label. Defaults to None.
    """
    iterator = tqdm(arguments, desc=description, disable=not progress, leave=False)
    workers = resolve_num_workers(num_workers)
    if workers == 1:
        return [func(arg) for arg in iterator]
    return list(Parallel(n_jobs=workers, backend="loky")(delayed(func)(arg) for arg in iterator))
