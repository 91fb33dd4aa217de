"""Seeded random streams.

Every stochastic operation takes a ``numpy.random.Generator``. To keep whole
runs reproducible, callers draw one child generator per operation invocation
from an :class:`RngStream`; child ``k`` is seeded by ``SeedSequence(master_seed,
spawn_key=(k,))`` so the stream depends only on the master seed and the
invocation counter.
"""
from __future__ import annotations

import numpy as np


class RngStream:
    def __init__(self, master_seed: int):
        self.master_seed = int(master_seed)
        self.counter = 0

    def child(self) -> np.random.Generator:
        seq = np.random.SeedSequence(self.master_seed, spawn_key=(self.counter,))
        self.counter += 1
        return np.random.Generator(np.random.PCG64(seq))

    def __repr__(self) -> str:
        return f"RngStream(master_seed={self.master_seed}, counter={self.counter})"
