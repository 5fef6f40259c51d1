"""Covolumes of complete sets in the positive orthant and toric capacities.

The covolume of ``P`` is the Euclidean volume of ``R^n_+ minus P``. For a
Reinhardt compact ``K`` in the unit polydisk with log-image ``Q``,

    Cap(K, D^n) = n! * Covol(Q°).

The factorial lives only in :func:`capacity`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .orthant import GeneratorSet, HalfSpaceSet, copolar
from .polytope import MAX_EXACT_DIM, polytope_volume
from .sampling import count_hits

Method = Literal["exact", "monte_carlo"]
MIN_SAMPLES = 1000
DEFAULT_SAMPLES = 1_000_000


@dataclass(frozen=True)
class CovolumeResult:
    value: float
    method: Method = "exact"
    std_err: float = 0.0
    samples: int = 0

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ValueError("covolume must be finite")
        if self.method == "exact" and (self.std_err != 0.0 or self.samples != 0):
            raise ValueError("exact results carry no sampling error")

    def scaled(self, factor: float) -> "CovolumeResult":
        return CovolumeResult(self.value * factor, self.method, self.std_err * abs(factor), self.samples)


def normalize_method(method: str) -> Method:
    if method in ("exact",):
        return "exact"
    if method in ("mc", "monte_carlo"):
        return "monte_carlo"
    raise ValueError(f"unknown method {method!r}; use 'exact' or 'mc'")


def axis_bounds(P: HalfSpaceSet) -> np.ndarray:
    """Per-axis bounds ``M_k = max_g 1/|g_k|`` of the complement of ``P``."""
    return np.max(1.0 / np.abs(P.normals), axis=0)


def bounding_box(P: HalfSpaceSet) -> float:
    """Side ``M`` of a cube ``[0, M]^n`` containing ``R^n_+ minus P``.

    If ``x`` is outside ``P`` then ``<x, |g|> < 1`` for some normal ``g``,
    which forces ``x_k < 1/|g_k|`` in every coordinate.
    """
    return float(axis_bounds(P).max())


def covolume_exact(P: HalfSpaceSet) -> CovolumeResult:
    n = P.dim
    if n > MAX_EXACT_DIM:
        raise ValueError(f"exact covolume supports n <= {MAX_EXACT_DIM}; use covolume_mc for n = {n}")
    M = axis_bounds(P)
    # P intersected with the box prod [0, M_k]
    A = np.vstack([P.normals, -np.eye(n), np.eye(n)])
    b = np.concatenate([-np.ones(len(P.normals)), np.zeros(n), M])
    box = float(np.prod(M))
    return CovolumeResult(box - polytope_volume(A, b))


def covolume_mc(P: HalfSpaceSet, samples: int = DEFAULT_SAMPLES, seed: int = 0, workers: int = 1) -> CovolumeResult:
    """Plain Monte Carlo estimate over the cube ``[0, M]^n``."""
    if samples < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} samples, got {samples}")
    n = P.dim
    M = bounding_box(P)
    outside = count_hits(lambda x: ~P.contains(x), np.zeros(n), np.full(n, M), samples, seed, workers)
    p = outside / samples
    box = M**n
    return CovolumeResult(box * p, "monte_carlo", box * math.sqrt(p * (1 - p) / samples), samples)


def covolume(P: HalfSpaceSet, method: str = "exact", samples: int = DEFAULT_SAMPLES, seed: int = 0) -> CovolumeResult:
    if normalize_method(method) == "exact":
        return covolume_exact(P)
    return covolume_mc(P, samples, seed)


def capacity(Q: GeneratorSet, method: str = "exact", samples: int = DEFAULT_SAMPLES, seed: int = 0) -> CovolumeResult:
    """Monge-Ampère capacity of the Reinhardt compact with log-image ``Q``."""
    return covolume(copolar(Q), method, samples, seed).scaled(math.factorial(Q.dim))


def weighted_energy(Q: GeneratorSet, c: float, method: str = "exact", samples: int = DEFAULT_SAMPLES, seed: int = 0) -> float:
    """Energy ``E(c * omega_K) = -c^(n+1) Cap(K)`` of a weighted extremal function."""
    if not c > 0:
        raise ValueError("weight must be positive")
    return -(c ** (Q.dim + 1)) * capacity(Q, method, samples, seed).value
