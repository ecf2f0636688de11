"""
Seeded random streams.

Every consumer of randomness asks for a generator by (master seed, stream, index).
The generator is numpy's PCG64 keyed by a SeedSequence spawn key, so stream i of path
j is the same on every platform and independent of how work is split across workers.
"""

from enum import IntEnum, unique
from typing import Optional

import numpy as np


@unique
class Stream(IntEnum):
    PATHS = 1
    TRAIN = 2
    RESET = 3
    BASIS = 4
    BATCH = 5
    FLOW = 6
    PROJECTION = 7
    MOMENTS = 8
    KMEANS = 9
    INSTANCE = 10
    EXPLORE = 11


def _sequence(seed: int, stream: Stream, index: int, sub: Optional[int]) -> np.random.SeedSequence:
    key = (int(stream), int(index)) if sub is None else (int(stream), int(index), int(sub))
    return np.random.SeedSequence(int(seed), spawn_key=key)


def generator(seed: int, stream: Stream, index: int = 0, sub: Optional[int] = None) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(_sequence(seed, stream, index, sub)))


def child_seed(seed: int, stream: Stream, index: int) -> int:
    # 63-bit integer seed for a nested run (batch means, recipes over kappa)
    ss = _sequence(seed, stream, index, None)
    return int(ss.generate_state(1, dtype=np.uint64)[0]) & ((1 << 63) - 1)

