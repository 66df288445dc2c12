"""Deterministic random streams for reproducible Monte Carlo runs.

All randomness flows through Philox, a counter-based 64-bit generator.
Per-replica streams are derived by hashing ``(seed, replica)`` through
numpy's ``SeedSequence``, so serial, batched and parallel schedules all
see identical draws.  Normal variates come from numpy's ziggurat
sampler (``Generator.standard_normal``).
"""

from __future__ import annotations

import numpy as np


def stream(seed: int) -> np.random.Generator:
    """Root generator for a run with the given 64-bit seed."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def replica_stream(seed: int, replica: int) -> np.random.Generator:
    """Independent generator for one replica, stable under scheduling.

    Identical ``(seed, replica)`` always yields the identical stream,
    no matter how replicas are grouped into batches or threads.
    """
    if replica < 0:
        raise ValueError("replica index must be nonnegative")
    ss = np.random.SeedSequence(seed, spawn_key=(replica,))
    return np.random.Generator(np.random.Philox(ss))
