"""Vertex enumeration and exact volumes of small H-polytopes.

The volume routine is the facet recursion

    vol_k(F) = (1/k) * sum_G dist(p_F, aff G) * vol_{k-1}(G)

over the facets G of a k-dimensional face F, with p_F the vertex centroid of
F. Faces are identified by their vertex sets, so redundant or repeated
constraints never contribute twice.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np

DET_TOL = 1e-12
ACTIVE_TOL = 1e-9
MAX_EXACT_DIM = 4


def enumerate_vertices(A: np.ndarray, b: np.ndarray, tol: float = ACTIVE_TOL) -> np.ndarray:
    """Return the vertices of ``{x : A x <= b}`` as rows of an array.

    Every ``d``-subset of constraints is intersected; rank-deficient subsets
    (|det| below ``DET_TOL`` after row normalization) are skipped, infeasible
    intersection points dropped, and coincident points merged.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    m, d = A.shape
    norms = np.linalg.norm(A, axis=1)
    An = A / norms[:, None]
    bn = b / norms
    if m < d:
        return np.zeros((0, d))
    idx = np.array(list(combinations(range(m), d)), dtype=int)
    M = An[idx]
    rhs = bn[idx]
    det = np.linalg.det(M)
    ok = np.abs(det) > DET_TOL
    if not ok.any():
        return np.zeros((0, d))
    pts = np.linalg.solve(M[ok], rhs[ok][..., None])[..., 0]
    scale = max(1.0, float(np.abs(pts).max()))
    feasible = np.all(pts @ An.T <= bn + tol * scale, axis=1)
    pts = pts[feasible]
    return _dedupe(pts, tol * scale)


def _dedupe(pts: np.ndarray, tol: float) -> np.ndarray:
    out: list[np.ndarray] = []
    for p in pts:
        if not any(np.max(np.abs(p - q)) <= tol for q in out):
            out.append(p)
    if not out:
        return np.zeros((0, pts.shape[1]))
    return np.array(out)


def _affine_rank(V: np.ndarray, tol: float) -> int:
    if len(V) <= 1:
        return 0
    D = V[1:] - V[0]
    sv = np.linalg.svd(D, compute_uv=False)
    return int(np.sum(sv > tol))


def _dist_to_affine_hull(p: np.ndarray, V: np.ndarray, dim: int) -> float:
    """Distance from ``p`` to the ``dim``-dimensional affine hull of ``V``."""
    r = p - V[0]
    if dim == 0:
        return float(np.linalg.norm(r))
    # the face dimension is known, so the span is truncated explicitly
    _, _, Vt = np.linalg.svd(V[1:] - V[0])
    basis = Vt[:dim]
    return float(np.linalg.norm(r - basis.T @ (basis @ r)))


def polytope_volume(A: np.ndarray, b: np.ndarray) -> float:
    """Exact volume of the bounded polytope ``{x : A x <= b}`` in dimension <= 4.

    Returns 0 for empty or lower-dimensional polytopes. Boundedness is the
    caller's responsibility.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    d = A.shape[1]
    if d > MAX_EXACT_DIM:
        raise ValueError(f"exact volume is limited to dimension <= {MAX_EXACT_DIM}; got {d}")
    V = enumerate_vertices(A, b)
    if len(V) <= d:
        return 0.0
    scale = max(1.0, float(np.abs(V).max()))
    tol = ACTIVE_TOL * scale
    norms = np.linalg.norm(A, axis=1)
    slack = np.abs(V @ (A / norms[:, None]).T - (b / norms))
    active = slack <= tol  # vertices x constraints
    if _affine_rank(V, tol) < d:
        return 0.0
    facets_of = [frozenset(np.flatnonzero(active[:, j]).tolist()) for j in range(A.shape[0])]
    memo: dict[frozenset, float] = {}

    def face_volume(face: frozenset, k: int) -> float:
        if k == 0:
            return 1.0
        if face in memo:
            return memo[face]
        pts = V[sorted(face)]
        if k == 1:
            diffs = pts[:, None, :] - pts[None, :, :]
            vol = float(np.sqrt((diffs ** 2).sum(-1)).max())
        else:
            centroid = pts.mean(axis=0)
            seen: set[frozenset] = set()
            vol = 0.0
            for fac in facets_of:
                sub = face & fac
                if len(sub) < k or sub in seen or sub == face:
                    continue
                if _affine_rank(V[sorted(sub)], tol) != k - 1:
                    continue
                seen.add(sub)
                h = _dist_to_affine_hull(centroid, V[sorted(sub)], k - 1)
                vol += h * face_volume(sub, k - 1)
            vol /= k
        memo[face] = vol
        return vol

    return face_volume(frozenset(range(len(V))), d)
