"""Weighted extremal functions and their geodesics in the toric model.

A weighted extremal function ``u = c * omega_K`` with log-image ``Q`` has
Legendre image ``max{h_Q(a) + c, 0}`` on the positive orthant. The geodesic
between ``u0`` and ``u1`` is, in logarithmic coordinates,

    u_t(s) = sup_{a >= 0} <a, s> - (1-t) max{h_Q0(a) + c0, 0} - t max{h_Q1(a) + c1, 0},

evaluated pointwise as a linear program in ``(a, w0, w1)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .orthant import GeneratorSet, interpolate, membership_depth, same_set, scale, support_function, support_function_many
from .simplex import NumericalError, UnboundedError, linprog_max

INTERIOR_GUARD = 1e-9
CONTACT_TOL = 1e-6
VALUE_TOL = 1e-9


@dataclass(frozen=True)
class WeightedExtremal:
    Q: GeneratorSet
    c: float = 1.0

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError("weight must be positive")

    @property
    def dim(self) -> int:
        return self.Q.dim


@dataclass(frozen=True)
class GeodesicSpec:
    u0: WeightedExtremal
    u1: WeightedExtremal

    def __post_init__(self):
        if self.u0.dim != self.u1.dim:
            raise ValueError("endpoints have different dimensions")

    @property
    def dim(self) -> int:
        return self.u0.dim

    def c_t(self, t: float) -> float:
        return (1 - t) * self.u0.c + t * self.u1.c


def _check_t(t: float) -> None:
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t}")


def _check_interior(s: np.ndarray, n: int) -> None:
    if s.shape != (n,):
        raise ValueError(f"point must have shape ({n},)")
    if np.any(s >= -INTERIOR_GUARD):
        raise ValueError("geodesics are evaluated at strictly negative points only")


def legendre_image(u: WeightedExtremal, a) -> float:
    return max(support_function(u.Q, a) + u.c, 0.0)


def eval_geodesic(spec: GeodesicSpec, t: float, s) -> float:
    _check_t(t)
    s = np.asarray(s, dtype=float)
    n = spec.dim
    _check_interior(s, n)
    G0, G1 = spec.u0.Q.generators, spec.u1.Q.generators
    m0, m1 = len(G0), len(G1)
    # variables: a (n), w0, w1;  <g, a> - w_j <= -c_j for every generator of Q_j
    c = np.concatenate([s, [-(1 - t), -t]])
    A = np.zeros((m0 + m1, n + 2))
    A[:m0, :n] = G0
    A[:m0, n] = -1.0
    A[m0:, :n] = G1
    A[m0:, n + 1] = -1.0
    b = np.concatenate([np.full(m0, -spec.u0.c), np.full(m1, -spec.u1.c)])
    try:
        return linprog_max(c, A, b).value
    except UnboundedError as exc:
        raise NumericalError(f"geodesic LP unbounded at s={s.tolist()}") from exc


def eval_extremal(Q: GeneratorSet, c: float, s) -> float:
    """``c * omega_K`` in logarithmic coordinates."""
    u = WeightedExtremal(Q, c)
    return eval_geodesic(GeodesicSpec(u, u), 0.0, s)


def geodesic_min(spec: GeodesicSpec, t: float, check: bool = False) -> float:
    """Minimum ``m_t = -c_t`` of the geodesic over the polydisk.

    Complete sets in the negative orthant always intersect, so the minimum is
    attained on the geometric mean. With ``check`` the value is confirmed by
    evaluating the geodesic at a generator of the interpolated set.
    """
    _check_t(t)
    m = -spec.c_t(t)
    if check:
        g = interpolate(spec.u0.Q, spec.u1.Q, t).generators[0]
        got = eval_geodesic(spec, t, g)
        if abs(got - m) > VALUE_TOL:
            raise NumericalError(f"geodesic minimum {got} disagrees with -c_t = {m}")
    return m


def contact_set_test(spec: GeodesicSpec, t: float, s, tol: float = CONTACT_TOL) -> bool:
    """Whether ``s`` lies in the set where the geodesic reaches its minimum."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    return eval_geodesic(spec, t, s) <= -spec.c_t(t) + tol


def equality_case_detect(spec: GeodesicSpec, tol: float = 1e-10) -> bool:
    """Whether ``c0 * Q1`` and ``c1 * Q0`` are the same set."""
    return same_set(scale(spec.u1.Q, spec.u0.c), scale(spec.u0.Q, spec.u1.c), tol)


@dataclass(frozen=True)
class OracleGrid:
    points: np.ndarray   # (N**n, n) evaluation points s
    values: np.ndarray   # grid lower bounds of the geodesic
    gap_bound: np.ndarray  # per-point bound on (true value - grid value)
    spacing: float


def grid_llt_oracle(
    spec: GeodesicSpec,
    t: float,
    L: float,
    eps: float,
    N: int,
    n_a: int | None = None,
) -> OracleGrid:
    """Brute-force Legendre transform on a grid, independent of the LP path.

    The supremum over ``a >= 0`` is restricted to the grid ``[0, A_max]^n``
    with ``n_a`` points per axis. For ``s <= -eps`` the objective is at most
    ``-eps * sum(a)`` while ``a = 0`` already gives ``-c_t``, so maximizers
    satisfy ``sum(a) <= c_t / eps``; ``A_max = max(c0, c1) / eps`` covers them.

    The objective is Lipschitz in ``a_k`` with constant
    ``C_k = |s_k| + max_j max_g |g_k|`` (generators over both endpoints), and
    every maximizer lies within ``spacing / 2`` of a grid node in each
    coordinate, hence ``0 <= true - grid <= (spacing / 2) * sum_k C_k``.
    """
    _check_t(t)
    if not (L > eps > 0):
        raise ValueError("need L > eps > 0")
    if N < 16:
        raise ValueError("need at least 16 points per axis")
    n = spec.dim
    n_a = N if n_a is None else n_a
    if n_a < 2:
        raise ValueError("degenerate a-grid")
    a_max = max(spec.u0.c, spec.u1.c) / eps
    axis_s = np.linspace(-L, -eps, N)
    axis_a = np.linspace(0.0, a_max, n_a)
    S = np.stack(np.meshgrid(*[axis_s] * n, indexing="ij"), -1).reshape(-1, n)
    Agrid = np.stack(np.meshgrid(*[axis_a] * n, indexing="ij"), -1).reshape(-1, n)
    penalty = (1 - t) * np.maximum(support_function_many(spec.u0.Q, Agrid) + spec.u0.c, 0.0)
    penalty += t * np.maximum(support_function_many(spec.u1.Q, Agrid) + spec.u1.c, 0.0)
    values = np.empty(len(S))
    for start in range(0, len(S), 256):
        block = S[start:start + 256] @ Agrid.T - penalty
        values[start:start + 256] = block.max(axis=1)
    spacing = a_max / (n_a - 1)
    gmax = np.maximum(np.abs(spec.u0.Q.generators).max(axis=0), np.abs(spec.u1.Q.generators).max(axis=0))
    gap = 0.5 * spacing * (np.abs(S) + gmax).sum(axis=1)
    return OracleGrid(S, values, gap, spacing)


def contact_margin(spec: GeodesicSpec, t: float, s) -> float:
    """Signed sup-norm depth of ``s`` in the interpolated set (positive inside)."""
    return membership_depth(interpolate(spec.u0.Q, spec.u1.Q, t).generators, s)
