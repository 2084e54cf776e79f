"""Sub-package with seeded random streams, parallel mapping and file I/O."""

from .parallel import chunked_map, parallel_replications, resolve_num_workers
from .rng import BIT_GENERATOR_NAME, draw_seed, make_rng, resolve_seed, spawn_rngs
