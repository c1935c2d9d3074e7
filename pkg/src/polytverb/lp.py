"""Small dense two-phase simplex for ``min c.x  s.t.  A x = b, x >= 0``.

Bland's rule is used for both entering and leaving variables, which rules
out cycling.  Intended for the oracle's tiny feasibility problems (tens of
rows and columns), not as a general LP solver.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

FEAS_TOL = 1e-9
PIVOT_TOL = 1e-11


@dataclass(frozen=True, eq=False)
class LPResult:
    status: str  # optimal | infeasible | unbounded | iteration_limit
    x: Optional[np.ndarray] = None
    fun: Optional[float] = None

    @property
    def success(self) -> bool:
        return self.status == "optimal"


def _pivot(T: np.ndarray, row: int, col: int) -> None:
    T[row] /= T[row, col]
    col_vals = T[:, col].copy()
    col_vals[row] = 0.0
    T -= np.outer(col_vals, T[row])


def _run(T: np.ndarray, basis: list[int], n_cols: int, max_iter: int) -> str:
    """Bland's-rule iterations on tableau ``T`` (last row = reduced costs)."""
    m = T.shape[0] - 1
    for _ in range(max_iter):
        costs = T[-1, :n_cols]
        entering = np.flatnonzero(costs < -FEAS_TOL)
        if entering.size == 0:
            return "optimal"
        col = int(entering[0])
        column = T[:m, col]
        rows = np.flatnonzero(column > PIVOT_TOL)
        if rows.size == 0:
            return "unbounded"
        ratios = T[rows, -1] / column[rows]
        best = ratios.min()
        ties = rows[ratios <= best + 1e-14 * max(1.0, abs(best))]
        row = int(min(ties, key=lambda i: basis[i]))
        _pivot(T, row, col)
        basis[row] = col
    return "iteration_limit"


def linprog_eq(c, A_eq, b_eq, max_iter: int = 10000) -> LPResult:
    """Minimize ``c @ x`` subject to ``A_eq @ x == b_eq`` and ``x >= 0``."""
    A = np.array(A_eq, dtype=float)
    b = np.array(b_eq, dtype=float)
    c = np.asarray(c, dtype=float)
    m, n = A.shape
    flip = b < 0
    A[flip] *= -1
    b[flip] *= -1

    # phase 1: artificials n..n+m-1
    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = A
    T[:m, n:n + m] = np.eye(m)
    T[:m, -1] = b
    T[-1, :n] = -A.sum(axis=0)
    T[-1, -1] = -b.sum()
    basis = list(range(n, n + m))
    status = _run(T, basis, n + m, max_iter)
    if status == "iteration_limit":
        return LPResult(status)
    scale = max(1.0, float(np.abs(b).max(initial=0.0)))
    if -T[-1, -1] > FEAS_TOL * scale:
        return LPResult("infeasible")

    # drive artificials out of the basis; drop redundant rows
    keep_rows = []
    for i in range(m):
        if basis[i] >= n:
            cands = np.flatnonzero(np.abs(T[i, :n]) > PIVOT_TOL)
            if cands.size == 0:
                continue
            _pivot(T, i, int(cands[0]))
            basis[i] = int(cands[0])
        keep_rows.append(i)
    T2 = np.zeros((len(keep_rows) + 1, n + 1))
    T2[:-1, :n] = T[keep_rows, :n]
    T2[:-1, -1] = T[keep_rows, -1]
    basis = [basis[i] for i in keep_rows]
    T2[:-1, -1] = np.clip(T2[:-1, -1], 0.0, None)

    # phase 2 reduced costs
    T2[-1, :n] = c
    T2[-1, -1] = 0.0
    for i, j in enumerate(basis):
        T2[-1] -= c[j] * T2[i]
    status = _run(T2, basis, n, max_iter)
    if status != "optimal":
        return LPResult(status)
    x = np.zeros(n)
    x[basis] = T2[:-1, -1]
    return LPResult("optimal", x, float(c @ x))


def feasible_point(A_eq, b_eq) -> Optional[np.ndarray]:
    res = linprog_eq(np.zeros(np.shape(A_eq)[1]), A_eq, b_eq)
    return res.x if res.success else None
