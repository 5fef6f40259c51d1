"""Reinhardt compacts in the unit polydisk and their Euclidean volumes.

Volumes use the change of variables ``u_k = |z_k|^2``: integrating out the
angles and substituting gives

    Vol_2n(K) = pi^n * Vol_n({u in (0, 1]^n : log u in 2 Q}),

with ``Q`` the log-image of ``K``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .covolume import DEFAULT_SAMPLES, MIN_SAMPLES, CovolumeResult, normalize_method
from .orthant import GeneratorSet, contains_many, copolar, interpolate, scale
from .sampling import count_hits


@dataclass(frozen=True, eq=False)
class ReinhardtSpec:
    """A complete log-convex Reinhardt compact, given by polydisk radii or log generators."""

    kind: Literal["polydisk", "log_generators"]
    radii: tuple[float, ...] | None = None
    generators: GeneratorSet | None = None

    def __post_init__(self):
        if self.kind == "polydisk":
            if self.radii is None or len(self.radii) == 0:
                raise ValueError("polydisk needs radii")
            r = tuple(float(x) for x in self.radii)
            if not all(0.0 < x < 1.0 for x in r):
                raise ValueError("polydisk radii must lie in (0, 1)")
            object.__setattr__(self, "radii", r)
        elif self.kind == "log_generators":
            if not isinstance(self.generators, GeneratorSet):
                raise ValueError("log_generators needs a GeneratorSet")
        else:
            raise ValueError(f"unknown kind {self.kind!r}")

    @classmethod
    def polydisk(cls, radii) -> "ReinhardtSpec":
        return cls("polydisk", radii=tuple(radii))

    @classmethod
    def from_generators(cls, generators) -> "ReinhardtSpec":
        if not isinstance(generators, GeneratorSet):
            generators = GeneratorSet(generators)
        return cls("log_generators", generators=generators)

    @property
    def dim(self) -> int:
        return len(self.radii) if self.kind == "polydisk" else self.generators.dim

    def to_json(self) -> dict:
        if self.kind == "polydisk":
            return {"polydisk": list(self.radii)}
        return {"generators": self.generators.generators.tolist()}

    @classmethod
    def from_json(cls, data: dict) -> "ReinhardtSpec":
        if "polydisk" in data:
            return cls.polydisk(data["polydisk"])
        if "generators" in data:
            return cls.from_generators(data["generators"])
        raise ValueError("set must have a 'polydisk' or 'generators' key")


def log_image(spec: ReinhardtSpec) -> GeneratorSet:
    if spec.kind == "polydisk":
        return GeneratorSet([np.log(spec.radii)])
    return spec.generators


def geometric_mean(spec0: ReinhardtSpec, spec1: ReinhardtSpec, t: float) -> ReinhardtSpec:
    """``K0^(1-t) K1^t``, whose log-image is ``(1-t) Q0 + t Q1``."""
    if spec0.dim != spec1.dim:
        raise ValueError("dimension mismatch")
    return ReinhardtSpec.from_generators(interpolate(log_image(spec0), log_image(spec1), t))


def volume(
    spec: ReinhardtSpec,
    method: str = "exact",
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
) -> CovolumeResult:
    """Euclidean 2n-volume of the compact.

    A single log generator (a polydisk) has the closed form
    ``pi^n prod rho_k^2``. Other sets are estimated by Monte Carlo in
    ``u``-space even when ``method='exact'`` is requested; ``method='mc'``
    forces sampling for polydisks too.
    """
    Q = log_image(spec)
    n = Q.dim
    mode = normalize_method(method)
    if mode == "exact" and len(Q) == 1:
        return CovolumeResult(math.pi**n * math.exp(2.0 * Q.generators[0].sum()))
    if samples < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} samples, got {samples}")
    Q2 = scale(Q, 2.0)
    verts = copolar(Q2).vertices()
    upper = np.exp(Q2.generators.max(axis=0))

    def inside(u):
        return contains_many(Q2, np.log(np.maximum(u, 1e-300)), verts)

    hits = count_hits(inside, np.zeros(n), upper, samples, seed)
    p = hits / samples
    box = math.pi**n * float(np.prod(upper))
    return CovolumeResult(box * p, "monte_carlo", box * math.sqrt(p * (1 - p) / samples), samples)


def volume_direct_mc(spec: ReinhardtSpec, samples: int, seed: int = 0) -> CovolumeResult:
    """Volume by sampling ``z`` in the real cube ``[-1, 1]^(2n)``.

    Kept as an independent check of the change of variables in :func:`volume`.
    """
    Q = log_image(spec)
    n = Q.dim
    verts = copolar(Q).vertices()

    def inside(x):
        mod = np.hypot(x[:, :n], x[:, n:])
        ok = np.all(mod < 1.0, axis=1) & np.all(mod > 0.0, axis=1)
        s = np.log(np.where(ok[:, None], mod, 0.5))
        return ok & contains_many(Q, s, verts)

    hits = count_hits(inside, -np.ones(2 * n), np.ones(2 * n), samples, seed)
    p = hits / samples
    box = 4.0**n
    return CovolumeResult(box * p, "monte_carlo", box * math.sqrt(p * (1 - p) / samples), samples)
