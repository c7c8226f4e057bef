"""Reproducible random streams.

Every stream is a Philox-4x64 counter-based generator keyed by
``SeedSequence(seed, spawn_key=(stream_id,))``.  Two streams with the same
``(seed, stream_id)`` produce identical draws on every platform numpy
supports; distinct ``stream_id`` values give independent keys.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RngStream:
    seed: int
    stream_id: int = 0

    def __post_init__(self):
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")
        if int(self.stream_id) < 0:
            raise ValueError("stream_id must be non-negative")

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(int(self.seed), spawn_key=(int(self.stream_id),))
        return np.random.Generator(np.random.Philox(ss))

    def child(self, stream_id: int) -> "RngStream":
        return RngStream(self.seed, stream_id)


def as_generator(rng) -> np.random.Generator:
    """Accept an RngStream, a Generator, an int seed, or None."""
    if isinstance(rng, RngStream):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    if rng is None or isinstance(rng, (int, np.integer)):
        return RngStream(0 if rng is None else int(rng)).generator()
    raise TypeError(f"cannot build a generator from {type(rng).__name__}")


def block_streams(seed: int, n_items: int, block_size: int):
    """Yield ``(start, stop, RngStream)`` for fixed-size blocks of item indices.

    Stream ids follow the block index, so results never depend on how blocks
    are later distributed over workers.
    """
    if block_size < 1:
        raise ValueError("block_size must be positive")
    for b, start in enumerate(range(0, n_items, block_size)):
        yield start, min(start + block_size, n_items), RngStream(seed, b)


def map_blocks(fn, seed: int, n_items: int, block_size: int, threads: int = 1):
    """Apply ``fn(start, stop, stream)`` to every block, in block order.

    Threads only change scheduling; the returned list is the same for any
    ``threads`` value.
    """
    blocks = list(block_streams(seed, n_items, block_size))
    if threads <= 1 or len(blocks) <= 1:
        return [fn(*b) for b in blocks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda b: fn(*b), blocks))
