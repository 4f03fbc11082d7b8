"""Deterministic seed streams.

Every stochastic routine takes an explicit 64-bit seed.  Parallel work is
partitioned by index: `child_seed(master, index)` derives an independent
stream per trial, so results are reproducible for a fixed master seed
regardless of scheduling or thread count.
"""

from __future__ import annotations

import numpy as np

_U64 = np.uint64


def child_seed(master: int, index: int) -> int:
    """Derived 64-bit seed for sub-stream `index` of stream `master`."""
    if master < 0 or index < 0:
        raise ValueError("seeds and trial indices must be nonnegative")
    ss = np.random.SeedSequence([int(master), int(index)])
    return int(ss.generate_state(1, _U64)[0])


def rng_from(master: int, index: int = 0) -> np.random.Generator:
    """Generator for sub-stream `index` of `master`."""
    return np.random.default_rng(child_seed(master, index))
