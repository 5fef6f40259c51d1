"""Complete convex sets in the negative and positive orthants.

A complete set ``Q`` in the negative orthant is stored by its generators,
``Q = conv(generators) + R^n_-``. Its copolar

    Q° = {x >= 0 : <x, y> <= -1 for all y in Q}

is a complete set in the positive orthant, stored by the normals ``g`` of the
constraints ``<x, g> <= -1``. Because ``<x, y>`` only decreases along the
recession cone of ``Q`` when ``x >= 0``, the normals of ``Q°`` are exactly the
generators of ``Q``; both directions of the duality are free.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .polytope import enumerate_vertices
from .simplex import linprog_max

DEFAULT_MARGIN = 1e-9
CONTAIN_TOL = 1e-10


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def _merge_duplicates(points: np.ndarray) -> np.ndarray:
    _, first = np.unique(points, axis=0, return_index=True)
    return points[np.sort(first)]


@dataclass(frozen=True, eq=False)
class GeneratorSet:
    """``conv(generators) + R^n_-`` with every coordinate at most ``-margin``."""

    generators: np.ndarray
    margin: float = DEFAULT_MARGIN

    def __post_init__(self):
        g = np.atleast_2d(np.asarray(self.generators, dtype=float))
        if g.size == 0 or g.ndim != 2:
            raise ValueError("a generator set needs at least one point")
        if not np.all(np.isfinite(g)):
            raise ValueError("generators must be finite")
        if not self.margin > 0:
            raise ValueError("margin must be positive")
        if np.any(g > -self.margin):
            raise ValueError(f"every generator coordinate must be <= -{self.margin:g}")
        object.__setattr__(self, "generators", _frozen(_merge_duplicates(g)))

    @property
    def dim(self) -> int:
        return self.generators.shape[1]

    def __len__(self):
        return self.generators.shape[0]

    def __eq__(self, other):
        if not isinstance(other, GeneratorSet):
            return NotImplemented
        return np.array_equal(self.generators, other.generators)

    def __repr__(self):
        return f"GeneratorSet({self.generators.tolist()})"


@dataclass(frozen=True, eq=False)
class HalfSpaceSet:
    """``{x >= 0 : <x, g> <= -1 for every normal g}``."""

    normals: np.ndarray
    margin: float = DEFAULT_MARGIN

    def __post_init__(self):
        g = np.atleast_2d(np.asarray(self.normals, dtype=float))
        if g.size == 0 or g.ndim != 2:
            raise ValueError("a half-space set needs at least one normal")
        if not np.all(np.isfinite(g)):
            raise ValueError("normals must be finite")
        if np.any(g > -self.margin):
            raise ValueError(f"every normal coordinate must be <= -{self.margin:g}")
        object.__setattr__(self, "normals", _frozen(_merge_duplicates(g)))

    @property
    def dim(self) -> int:
        return self.normals.shape[1]

    def __eq__(self, other):
        if not isinstance(other, HalfSpaceSet):
            return NotImplemented
        return np.array_equal(self.normals, other.normals)

    def contains(self, x) -> np.ndarray:
        """Vectorized membership for a point or an array of points."""
        x = np.asarray(x, dtype=float)
        return np.all(x >= 0, axis=-1) & np.all(x @ self.normals.T <= -1.0, axis=-1)

    def vertices(self) -> np.ndarray:
        """Vertices of the (unbounded) polyhedron, one per row."""
        n = self.dim
        A = np.vstack([self.normals, -np.eye(n)])
        b = np.concatenate([-np.ones(len(self.normals)), np.zeros(n)])
        return enumerate_vertices(A, b)

    def __repr__(self):
        return f"HalfSpaceSet({self.normals.tolist()})"


def _check_dim(n: int, x: np.ndarray, what: str) -> None:
    if x.shape[-1] != n:
        raise ValueError(f"{what} has dimension {x.shape[-1]}, expected {n}")


def support_function(Q: GeneratorSet, a) -> float:
    """``h_Q(a) = sup_{s in Q} <a, s>``, finite for ``a >= 0``."""
    a = np.asarray(a, dtype=float)
    _check_dim(Q.dim, a, "direction")
    if np.any(a < 0):
        raise ValueError("support function is only finite on the positive orthant")
    return float(np.max(Q.generators @ a))


def support_function_many(Q: GeneratorSet, A: np.ndarray) -> np.ndarray:
    """Support function evaluated at every row of ``A`` (no sign checks)."""
    return np.max(np.asarray(A, dtype=float) @ Q.generators.T, axis=-1)


def membership_depth(generators: np.ndarray, s) -> float:
    """Largest ``tau`` with ``s + tau * 1`` dominated by a convex combination.

    Positive inside, zero on the boundary, negative outside (the value is
    minus the sup-norm distance to the set). Solved as the LP

        maximize tau  s.t.  sum_i lam_i g_i >= s + tau,  sum_i lam_i = 1,  lam >= 0.
    """
    G = np.atleast_2d(np.asarray(generators, dtype=float))
    s = np.asarray(s, dtype=float)
    m, n = G.shape
    # variables: lam (m), tau_plus, tau_minus
    c = np.zeros(m + 2)
    c[m], c[m + 1] = 1.0, -1.0
    A_ub = np.hstack([-G.T, np.ones((n, 1)), -np.ones((n, 1))])
    b_ub = -s
    A_eq = np.zeros((1, m + 2))
    A_eq[0, :m] = 1.0
    res = linprog_max(c, A_ub, b_ub, A_eq, [1.0])
    return res.value


def contains(Q: GeneratorSet, s, tol: float = CONTAIN_TOL) -> bool:
    s = np.asarray(s, dtype=float)
    _check_dim(Q.dim, s, "point")
    # dominated by a single generator: no LP needed
    if np.any(np.all(Q.generators >= s - tol, axis=1)):
        return True
    if len(Q) == 1:
        return False
    return membership_depth(Q.generators, s) >= -tol


def reduce(Q: GeneratorSet, tol: float = CONTAIN_TOL) -> GeneratorSet:
    """Drop every generator lying in the set spanned by the remaining ones.

    Generators are examined in input order, so the output is canonical for a
    given input ordering.
    """
    G = Q.generators
    keep = list(range(len(G)))
    for i in range(len(G)):
        others = [j for j in keep if j != i]
        if not others:
            continue
        rest = G[others]
        if np.any(np.all(rest >= G[i], axis=1)):
            keep.remove(i)
            continue
        if len(others) > 1 and membership_depth(rest, G[i]) >= -tol:
            keep.remove(i)
    if len(keep) == len(G):
        return Q
    return GeneratorSet(G[keep], Q.margin)


def interpolate(Q0: GeneratorSet, Q1: GeneratorSet, t: float) -> GeneratorSet:
    """Minkowski combination ``(1 - t) Q0 + t Q1`` (log-image of a geometric mean)."""
    if Q0.dim != Q1.dim:
        raise ValueError("dimension mismatch")
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t}")
    if t == 0.0:
        return reduce(Q0)
    if t == 1.0:
        return reduce(Q1)
    G = ((1 - t) * Q0.generators[:, None, :] + t * Q1.generators[None, :, :]).reshape(-1, Q0.dim)
    return reduce(GeneratorSet(G, min(Q0.margin, Q1.margin)))


def scale(X, lam: float):
    """Dilate a set by ``lam > 0``.

    A ``GeneratorSet`` has its generators multiplied by ``lam``; a
    ``HalfSpaceSet`` ``P`` becomes ``lam * P``, whose normals are the old
    normals divided by ``lam``.
    """
    if not lam > 0:
        raise ValueError("scale factor must be positive")
    if isinstance(X, GeneratorSet):
        return GeneratorSet(lam * X.generators, min(X.margin, lam * X.margin))
    if isinstance(X, HalfSpaceSet):
        return HalfSpaceSet(X.normals / lam, min(X.margin, X.margin / lam))
    raise TypeError(f"cannot scale {type(X).__name__}")


def copolar(Q: GeneratorSet) -> HalfSpaceSet:
    return HalfSpaceSet(Q.generators, Q.margin)


def copolar_inverse(P: HalfSpaceSet) -> GeneratorSet:
    return reduce(GeneratorSet(P.normals, P.margin))


def copolar_add(P0: HalfSpaceSet, P1: HalfSpaceSet, t: float) -> HalfSpaceSet:
    """``((1 - t) P0° + t P1°)°``, the copolar combination of two sets."""
    if P0.dim != P1.dim:
        raise ValueError("dimension mismatch")
    return copolar(interpolate(copolar_inverse(P0), copolar_inverse(P1), t))


def same_set(Q0: GeneratorSet, Q1: GeneratorSet, tol: float = CONTAIN_TOL) -> bool:
    """Mutual containment of generators, i.e. equality of the represented sets."""
    if Q0.dim != Q1.dim:
        return False
    return all(contains(Q1, g, tol) for g in Q0.generators) and all(
        contains(Q0, g, tol) for g in Q1.generators
    )


def contains_many(Q: GeneratorSet, S: np.ndarray, vertices: np.ndarray | None = None) -> np.ndarray:
    """Vectorized membership through the vertices of the copolar.

    By involution ``Q = {s <= 0 : <v, s> <= -1 for every vertex v of Q°}``;
    pass ``vertices`` to reuse a precomputed vertex list.
    """
    S = np.asarray(S, dtype=float)
    V = copolar(Q).vertices() if vertices is None else vertices
    return np.all(S <= 0, axis=-1) & np.all(S @ V.T <= -1.0 + 1e-12, axis=-1)
