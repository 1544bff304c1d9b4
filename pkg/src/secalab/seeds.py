"""Named sub-stream derivation so every experiment draw is reproducible.

All randomness in the CLI flows from a single root seed; each consumer asks
for a (purpose, index) stream, which makes partial re-runs and thread-count
changes irrelevant to the results.
"""
from __future__ import annotations

import zlib

import numpy as np


def substream(seed: int, purpose: str, index: int = 0) -> np.random.Generator:
    """RNG stream keyed by (root seed, purpose string, index)."""
    key = zlib.crc32(purpose.encode("utf-8"))
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(key, index)))


def as_rng(rng) -> np.random.Generator:
    """Accept a Generator, a seed int, or None (fresh entropy)."""
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)
