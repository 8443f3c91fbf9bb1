"""Shared random-word stream for the simulation kernels.

Both kernel backends consume 64-bit words from the same chunked stream and
map them to bounded integers with the identical multiply-shift reduction, so
a fixed seed produces bit-identical runs on either backend.
"""

from __future__ import annotations

import numpy as np


class WordStream:
    """Chunked supply of uniform uint64 words drawn from a numpy Generator."""

    __slots__ = ("_rng", "chunk")

    def __init__(self, rng: np.random.Generator, chunk: int = 1 << 16):
        self._rng = rng
        self.chunk = chunk

    def next_block(self) -> np.ndarray:
        return self._rng.integers(0, 1 << 64, size=self.chunk, dtype=np.uint64)


def spawn_seeds(seed: int, count: int) -> list[np.random.SeedSequence]:
    """Independent child seed sequences for parallel/sequential trials."""
    return np.random.SeedSequence(seed).spawn(count)
