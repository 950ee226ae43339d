"""Seeded random number streams.

All randomness in the package flows through PCG64 generators keyed by
``numpy.random.SeedSequence(seed, spawn_key=(stream,))``.  PCG64 is a
documented, platform-independent algorithm, so a given ``(seed, stream)``
pair yields the same draw sequence on every machine.  Separate stream tags
keep the train/test split independent of network width: every width trained
from the same seed sees identical data partitions.
"""

import numpy as np

STREAM_SPLIT = 0
STREAM_INIT = 1
STREAM_BATCHES = 2


def seeded_rng(seed: int, stream: int) -> np.random.Generator:
    """Return the PCG64 generator for one purpose-tagged stream of a seed."""
    if seed < 0:
        raise ValueError("seed must be non-negative")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(stream,))))
