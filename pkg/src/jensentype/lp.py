"""Small dense linear programming solver (two-phase tableau simplex).

Only intended for the tiny programs that show up here: a handful of
variables and at most a few dozen inequality rows.  Bland's rule is used
throughout, so the method cannot cycle on degenerate problems.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalFailure

_PIVOT_TOL = 1e-11


@dataclass
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: np.ndarray | None
    fun: float
    dual: np.ndarray | None  # multipliers y >= 0 for A_ub x <= b_ub
    iterations: int


def _pivot(T: np.ndarray, row: int, col: int) -> None:
    T[row] /= T[row, col]
    for r in range(T.shape[0]):
        if r != row and T[r, col] != 0.0:
            T[r] -= T[r, col] * T[row]


def _run(T, basis, cost_row, allowed, max_iter, it):
    """Iterate on tableau ``T`` (last row is the objective) until optimal."""
    m = T.shape[0] - 1
    while True:
        if it >= max_iter:
            raise NumericalFailure(f"simplex did not converge in {max_iter} pivots")
        reduced = T[cost_row, :-1]
        entering = -1
        for j in np.flatnonzero(allowed):
            if reduced[j] < -1e-10:
                entering = j
                break
        if entering < 0:
            return "optimal", it
        col = T[:m, entering]
        best, leave = np.inf, -1
        for i in range(m):
            if col[i] > _PIVOT_TOL:
                ratio = T[i, -1] / col[i]
                if ratio < best - 1e-13 or (abs(ratio - best) <= 1e-13 and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave < 0:
            return "unbounded", it
        _pivot(T, leave, entering)
        basis[leave] = entering
        it += 1


def linprog(c, A_ub, b_ub, free=None, max_iter: int = 5000) -> LPResult:
    """Minimize ``c @ x`` subject to ``A_ub @ x <= b_ub``.

    ``free`` is a boolean mask of variables without a sign constraint; all
    other variables must be nonnegative.  By default every variable is free.
    """
    c = np.asarray(c, dtype=float)
    A = np.atleast_2d(np.asarray(A_ub, dtype=float))
    b = np.asarray(b_ub, dtype=float)
    m, n = A.shape
    free = np.ones(n, dtype=bool) if free is None else np.asarray(free, dtype=bool)

    # Columns: x+ (n), x- (free only), slacks (m), artificials (m).
    free_idx = np.flatnonzero(free)
    nf = free_idx.size
    sign = np.where(b < 0, -1.0, 1.0)
    M = np.hstack([A, -A[:, free_idx], np.eye(m)]) * sign[:, None]
    rhs = b * sign
    nv = M.shape[1]
    cost = np.concatenate([c, -c[free_idx], np.zeros(m)])

    T = np.zeros((m + 2, nv + m + 1))
    T[:m, :nv] = M
    T[:m, nv:nv + m] = np.eye(m)
    T[:m, -1] = rhs
    T[m, :nv] = cost
    T[m + 1, nv:nv + m] = 1.0
    # Price out the artificials from the phase-one row.
    T[m + 1] -= T[:m].sum(axis=0)
    basis = list(range(nv, nv + m))

    allowed = np.ones(nv + m, dtype=bool)
    # Phase one works on all rows but the phase-two objective.
    T1 = np.vstack([T[:m], T[m + 1:m + 2]])
    status, it = _run(T1, basis, m, allowed, max_iter, 0)
    T[:m] = T1[:m]
    T[m + 1] = T1[m]
    # Recompute phase-two objective row from scratch for the current basis.
    T[m] = np.concatenate([cost, np.zeros(m), [0.0]])
    for i, j in enumerate(basis):
        if T[m, j] != 0.0:
            T[m] -= T[m, j] * T[i]
    if -T1[m, -1] > 1e-9 * max(1.0, np.abs(rhs).max(initial=0.0)):
        return LPResult("infeasible", None, np.inf, None, it)

    # Drive zero-level artificials out of the basis where possible.
    for i, j in enumerate(basis):
        if j >= nv:
            cand = np.flatnonzero(np.abs(T[i, :nv]) > 1e-9)
            if cand.size:
                _pivot(T, i, cand[0])
                basis[i] = cand[0]

    allowed = np.zeros(nv + m, dtype=bool)
    allowed[:nv] = True
    T2 = T[:m + 1]
    status, it = _run(T2, basis, m, allowed, max_iter, it)
    if status == "unbounded":
        return LPResult("unbounded", None, -np.inf, None, it)

    z = np.zeros(nv + m)
    for i, j in enumerate(basis):
        z[j] = T2[i, -1]
    x = z[:n].copy()
    x[free_idx] -= z[n:n + nf]

    full = np.hstack([M, np.eye(m)])
    full_cost = np.concatenate([cost, np.zeros(m)])
    B = full[:, basis]
    pi = np.linalg.solve(B.T, full_cost[basis])
    dual = -sign * pi
    return LPResult("optimal", x, float(c @ x), dual, it)
