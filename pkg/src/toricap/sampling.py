"""Reproducible uniform sampling on counter-based Philox streams.

Samples are produced in fixed-size chunks. Chunk ``k`` of seed ``s`` always
comes from the Philox stream with key ``s`` and counter ``k << 128``, so any
partition of the chunks across workers yields bit-identical results.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable

import numpy as np

CHUNK = 1 << 16


def chunk_uniform(seed: int, chunk: int, size: int, dim: int) -> np.ndarray:
    """Uniform ``[0, 1)`` samples of shape ``(size, dim)`` for one chunk."""
    if not 0 <= seed < 2**128:
        raise ValueError("seed must be a non-negative integer below 2**128")
    bitgen = np.random.Philox(key=seed, counter=chunk << 128)
    return np.random.Generator(bitgen).random((size, dim))


def count_hits(
    indicator: Callable[[np.ndarray], np.ndarray],
    lower: np.ndarray,
    upper: np.ndarray,
    samples: int,
    seed: int,
    workers: int = 1,
) -> int:
    """Number of uniform samples in the box ``[lower, upper]`` accepted by ``indicator``."""
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    dim = lower.size
    sizes = [min(CHUNK, samples - k * CHUNK) for k in range(-(-samples // CHUNK))]

    def one(k: int) -> int:
        u = chunk_uniform(seed, k, sizes[k], dim)
        return int(np.count_nonzero(indicator(lower + u * (upper - lower))))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            return sum(ex.map(one, range(len(sizes))))
    return sum(one(k) for k in range(len(sizes)))
