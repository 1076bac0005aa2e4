"""Pinned pseudo-random generator for reproducible optimizer runs."""

import numpy as np

from ..core.errors import InvalidParameterError

MAX_SEED = 2**64 - 1


def check_seed(seed) -> int:
    """
    Validate a 64-bit unsigned seed.

    Raises:
        InvalidParameterError: If the seed is not an integer in [0, 2**64).
    """
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)) or not 0 <= seed <= MAX_SEED:
        raise InvalidParameterError(f"Seed must be an integer in [0, 2**64), got {seed!r}")
    return int(seed)


def make_rng(seed: int) -> np.random.Generator:
    """
    PCG64 generator for one optimizer run.

    Every draw an optimizer makes comes from this single stream, in program
    order, so a seed fixes the whole run.
    """
    return np.random.Generator(np.random.PCG64(check_seed(seed)))
