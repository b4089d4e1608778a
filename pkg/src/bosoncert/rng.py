"""Seed handling and derived random streams.

All randomness in the package flows through numpy's PCG64 generator.  Parallel
work (one stream per interferometer, per run, per model) derives independent
child streams from a single root seed via ``SeedSequence`` spawn keys, so
ensembles are reproducible regardless of scheduling order.
"""

from __future__ import annotations

from typing import Union

import numpy as np

SeedLike = Union[int, np.random.SeedSequence, np.random.Generator]

MAX_SEED = 2**64 - 1


def validate_seed(seed: int) -> int:
    """Check that ``seed`` is a 64-bit unsigned integer and return it."""
    if not isinstance(seed, (int, np.integer)):
        raise TypeError(f"seed must be an integer, got {type(seed).__name__}")
    if not 0 <= seed <= MAX_SEED:
        raise ValueError(f"seed must fit in 64 bits, got {seed}")
    return int(seed)


def as_generator(seed: SeedLike) -> np.random.Generator:
    """Coerce a seed, seed sequence, or generator into a Generator.

    An existing Generator is returned as-is (caller keeps ownership of the
    stream); integers and SeedSequences create a fresh PCG64 stream.
    """
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, np.random.SeedSequence):
        return np.random.default_rng(seed)
    return np.random.default_rng(validate_seed(seed))


def derive_rng(seed: int, *key: int) -> np.random.Generator:
    """Child stream for task ``key`` under root ``seed``.

    Streams with distinct keys are statistically independent; the same
    (seed, key) always yields the same stream.  Key components must be
    non-negative and below 2^32 (SeedSequence spawn-key width).
    """
    for part in key:
        if not 0 <= part < 2**32:
            raise ValueError(f"stream key component out of range: {part}")
    return np.random.default_rng(
        np.random.SeedSequence(entropy=validate_seed(seed), spawn_key=tuple(key))
    )
