"""Dense two-phase simplex method for the small linear programs used here.

Problems have the form::

    maximize    c @ x
    subject to  A_ub @ x <= b_ub
                A_eq @ x == b_eq
                x >= 0

Pivoting follows Bland's rule, so the method terminates on degenerate
instances. The instances in this package have at most a few dozen rows and
columns, which is well inside what a dense tableau handles comfortably.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

PIVOT_TOL = 1e-12
OPT_TOL = 1e-10
FEAS_TOL = 1e-9


class NumericalError(RuntimeError):
    """A computation failed for numerical rather than input reasons."""


class InfeasibleError(NumericalError):
    pass


class UnboundedError(NumericalError):
    pass


@dataclass(frozen=True)
class LPResult:
    x: np.ndarray
    value: float
    iterations: int


def _pivot(T: np.ndarray, basis: list[int], row: int, col: int) -> None:
    T[row] /= T[row, col]
    col_vals = T[:, col].copy()
    col_vals[row] = 0.0
    T -= np.outer(col_vals, T[row])
    basis[row] = col


def _run(T: np.ndarray, basis: list[int], ncols: int, max_iter: int) -> int:
    """Iterate on tableau ``T`` whose last row holds reduced costs.

    The objective row stores ``c_j - z_j``; a positive entry means the column
    improves the (maximization) objective. Only the first ``ncols`` columns
    may enter.
    """
    m = T.shape[0] - 1
    for it in range(max_iter):
        costs = T[-1, :ncols]
        entering = np.flatnonzero(costs > OPT_TOL)
        if entering.size == 0:
            return it
        col = int(entering[0])
        column = T[:m, col]
        positive = column > PIVOT_TOL
        if not positive.any():
            raise UnboundedError("linear program is unbounded")
        ratios = np.full(m, np.inf)
        ratios[positive] = T[:m, -1][positive] / column[positive]
        best = ratios.min()
        ties = np.flatnonzero(ratios <= best + PIVOT_TOL * max(1.0, abs(best)))
        row = min(ties, key=lambda r: basis[r])
        _pivot(T, basis, int(row), col)
    raise NumericalError(f"simplex did not converge in {max_iter} iterations")


def linprog_max(c, A_ub=None, b_ub=None, A_eq=None, b_eq=None, *, max_iter=5000) -> LPResult:
    """Maximize ``c @ x`` over the polyhedron described above.

    Raises
    ------
    InfeasibleError
        If phase one cannot drive the artificial variables to zero.
    UnboundedError
        If the objective is unbounded above on the feasible set.
    """
    c = np.asarray(c, dtype=float)
    nvar = c.size
    A_ub = np.zeros((0, nvar)) if A_ub is None else np.atleast_2d(np.asarray(A_ub, dtype=float))
    b_ub = np.zeros(0) if b_ub is None else np.asarray(b_ub, dtype=float).ravel()
    A_eq = np.zeros((0, nvar)) if A_eq is None else np.atleast_2d(np.asarray(A_eq, dtype=float))
    b_eq = np.zeros(0) if b_eq is None else np.asarray(b_eq, dtype=float).ravel()
    if A_ub.shape != (b_ub.size, nvar) or A_eq.shape != (b_eq.size, nvar):
        raise ValueError("constraint shapes do not match the objective")

    m_ub, m_eq = b_ub.size, b_eq.size
    m = m_ub + m_eq
    # columns: original | slack/surplus (one per inequality) | artificials | rhs
    n_art_rows = [i for i in range(m_ub) if b_ub[i] < 0] + list(range(m_ub, m))
    n_art = len(n_art_rows)
    ncols = nvar + m_ub + n_art
    T = np.zeros((m + 1, ncols + 1))
    basis: list[int] = [0] * m

    T[:m_ub, :nvar] = A_ub
    T[:m_ub, nvar:nvar + m_ub] = np.eye(m_ub)
    T[:m_ub, -1] = b_ub
    T[m_ub:m, :nvar] = A_eq
    T[m_ub:m, -1] = b_eq
    art_col = nvar + m_ub
    for i in range(m):
        if T[i, -1] < 0:
            T[i] *= -1.0
    for i in range(m_ub):
        if i not in n_art_rows:
            basis[i] = nvar + i
    for k, i in enumerate(n_art_rows):
        T[i, art_col + k] = 1.0
        basis[i] = art_col + k

    iterations = 0
    if n_art:
        # phase one: maximize -(sum of artificials)
        T[-1, :] = 0.0
        for i in n_art_rows:
            T[-1, :] += T[i, :]
        T[-1, art_col:ncols] = 0.0
        iterations += _run(T, basis, ncols, max_iter)
        infeasibility = T[-1, -1]
        if abs(T[-1, -1]) > FEAS_TOL * max(1.0, np.abs(T[:m, -1]).max(initial=0.0)):
            raise InfeasibleError(f"linear program is infeasible (residual {infeasibility:.3g})")
        # drive remaining artificials out of the basis
        for i in range(m):
            if basis[i] >= art_col:
                candidates = np.flatnonzero(np.abs(T[i, :art_col]) > PIVOT_TOL)
                if candidates.size:
                    _pivot(T, basis, i, int(candidates[0]))
        keep = [i for i in range(m) if basis[i] < art_col]
        T = np.vstack([T[keep], T[-1:]])
        T = np.hstack([T[:, :art_col], T[:, -1:]])
        basis = [basis[i] for i in keep]
        m = len(keep)

    ncols = art_col
    T[-1, :] = 0.0
    T[-1, :nvar] = c
    for i, b in enumerate(basis):
        if b < nvar and c[b] != 0.0:
            T[-1, :] -= c[b] * T[i, :]
    iterations += _run(T, basis, ncols, max_iter)

    x = np.zeros(ncols)
    for i, b in enumerate(basis):
        x[b] = T[i, -1]
    x = x[:nvar]
    return LPResult(x=x, value=float(c @ x), iterations=iterations)
