"""Colorful Caratheodory search for a zero of the equivariant map.

Each class of a :class:`~polytverb.reduction.MapTable` sums to zero, so the
origin lies in the convex hull of every class.  With ``dim W + 1`` classes a
colorful selection capturing the origin exists; we find one by the
Barany-Onn pivoting scheme: repeatedly take the point ``z`` of the current
colorful hull nearest the origin, drop a color that ``z`` does not use, and
bring in the member of that color most opposed to ``z``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .exceptions import InvalidInputError
from .reduction import MapTable

EPS_ZERO = 1e-9
EPS_QP = 1e-12
MIN_DECREASE = 1e-15


class SolverStatus(str, enum.Enum):
    ZERO = "Zero"
    MAX_ITERATIONS = "MaxIterations"
    PRECONDITION_FAILED = "PreconditionFailed"


@dataclass(frozen=True, eq=False)
class ColorfulSelection:
    chosen: np.ndarray
    weights: np.ndarray
    residual: float


@dataclass(frozen=True)
class SolverReport:
    iterations: int
    pivots: int
    final_residual: float
    status: SolverStatus
    restarts: int = 0
    norm_history: tuple[tuple[float, ...], ...] = field(default=(), repr=False)

    def to_dict(self) -> dict:
        return {"status": self.status.value, "iterations": self.iterations,
                "pivots": self.pivots, "restarts": self.restarts,
                "final_residual": self.final_residual}


def _affine_minimizer(Q: np.ndarray) -> np.ndarray:
    """Weights ``a`` (summing to 1) minimizing ``|a @ Q|`` over the affine hull."""
    if Q.shape[0] == 1:
        return np.ones(1)
    B = Q[1:] - Q[0]
    beta, *_ = np.linalg.lstsq(B.T, -Q[0], rcond=None)
    return np.concatenate([[1.0 - beta.sum()], beta])


def nearest_point_in_hull(vectors, warm_start=None, tol: float = EPS_QP,
                          max_iter: Optional[int] = None):
    """Wolfe's minimum-norm-point algorithm.

    Parameters
    ----------
    vectors : array, shape (n, d)
    warm_start : tuple (indices, weights), optional
        A starting convex combination; the indices should be affinely
        independent.
    tol : float
        Relative optimality tolerance, measured against the largest squared
        norm among the inputs.

    Returns
    -------
    z : ndarray, shape (d,)
        Point of the hull nearest the origin.
    weights : ndarray, shape (n,)
        Convex weights with ``weights @ vectors == z``.
    """
    P = np.asarray(vectors, dtype=float)
    if P.ndim != 2 or P.shape[0] == 0:
        raise InvalidInputError(f"expected a non-empty (n, d) array, got shape {P.shape}")
    n = P.shape[0]
    norms2 = np.einsum("ij,ij->i", P, P)
    scale2 = max(float(norms2.max()), 1e-300)
    if warm_start is not None and len(warm_start[0]):
        S = [int(i) for i in warm_start[0]]
        lam = np.asarray(warm_start[1], dtype=float)
        lam = np.clip(lam, 0, None)
        lam = lam / lam.sum() if lam.sum() > 0 else np.full(len(S), 1.0 / len(S))
    else:
        S = [int(np.argmin(norms2))]
        lam = np.ones(1)
    x = lam @ P[S]
    pos_tol = 1e-14
    max_iter = max_iter or 50 * (n + P.shape[1] + 10)

    for _ in range(max_iter):
        xx = float(x @ x)
        if xx <= 1e-30 * scale2:
            break
        dots = P @ x
        j = int(np.argmin(dots))
        if xx - dots[j] <= tol * scale2 or j in S:
            break
        S.append(j)
        lam = np.append(lam, 0.0)
        for _minor in range(len(S) + 1):
            alpha = _affine_minimizer(P[S])
            if np.all(alpha > pos_tol):
                lam = alpha
                break
            neg = alpha <= pos_tol
            denom = lam[neg] - alpha[neg]
            ratios = np.where(denom > 0, lam[neg] / np.where(denom > 0, denom, 1), np.inf)
            theta = min(1.0, float(ratios.min()))
            lam = theta * alpha + (1.0 - theta) * lam
            keep = lam > pos_tol
            if keep.all():
                keep[int(np.argmin(lam))] = False
            S = [s for s, k in zip(S, keep) if k]
            lam = lam[keep]
            lam = lam / lam.sum()
        x = lam @ P[S]

    weights = np.zeros(n)
    weights[S] = lam
    return weights @ P, weights


def _polish(P: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Solve ``t @ P_S = 0, sum t = 1`` exactly on the current support."""
    S = np.flatnonzero(weights > 0)
    A = np.vstack([P[S].T, np.ones(S.size)])
    b = np.zeros(A.shape[0])
    b[-1] = 1.0
    t, *_ = np.linalg.lstsq(A, b, rcond=None)
    if np.any(t < 0):
        return weights
    out = np.zeros_like(weights)
    out[S] = t / t.sum()
    if np.linalg.norm(out @ P) <= np.linalg.norm(weights @ P):
        return out
    return weights


def check_barycenters(table: MapTable, tol: float = 1e-8) -> float:
    """Largest class-sum norm, relative to the largest entry (at least 1)."""
    scale = max(1.0, float(np.abs(table.vectors).max()))
    return float(np.linalg.norm(table.class_sums(), axis=1).max()) / scale


def solve(table: MapTable, max_iter: int = 20000, seed=0, eps_zero: float = EPS_ZERO,
          initial: Optional[Sequence[int]] = None):
    """Find a colorful selection whose hull contains the origin.

    Parameters
    ----------
    table : MapTable
        One class of ``|G|`` vectors per point; classes must sum to zero.
    max_iter : int
        Total pivot budget.  A run that has not reached the origin after
        ``max_iter // 4`` pivots restarts from a fresh random selection.
    seed : int
        Seeds the random initial selections.
    eps_zero : float
        Norm at which the nearest point counts as the origin.
    initial : sequence of int, optional
        Starting selection (enumeration indices), overriding the random one.

    Returns
    -------
    selection : ColorfulSelection or None
        ``None`` only when the precondition fails.
    report : SolverReport
    """
    V = table.vectors
    n_cls, r, _ = V.shape
    if check_barycenters(table) > 1e-8:
        return None, SolverReport(0, 0, float("inf"), SolverStatus.PRECONDITION_FAILED)

    rng = np.random.default_rng(seed)
    rows = np.arange(n_cls)
    sel = (np.asarray(initial, dtype=int).copy() if initial is not None
           else rng.integers(r, size=n_cls))
    segment_budget = max(1, max_iter // 4)
    segments: list[list[float]] = [[]]
    warm = None
    best = None
    pivots = restarts = seg_pivots = 0

    def restart():
        nonlocal sel, warm, restarts, seg_pivots
        sel = rng.integers(r, size=n_cls)
        warm = None
        restarts += 1
        seg_pivots = 0
        segments.append([])

    for it in range(1, max_iter + 1):
        P = V[rows, sel]
        z, w = nearest_point_in_hull(P, warm)
        nz = float(np.linalg.norm(z))
        hist = segments[-1]
        if hist and nz > hist[-1] - MIN_DECREASE:
            restart()
            continue
        hist.append(nz)
        if best is None or nz < best[2]:
            best = (sel.copy(), w, nz)
        if nz <= eps_zero:
            w = _polish(P, w)
            res = float(np.linalg.norm(w @ P))
            return (ColorfulSelection(sel.copy(), w, res),
                    SolverReport(it, pivots, res, SolverStatus.ZERO, restarts,
                                 tuple(tuple(s) for s in segments)))
        if seg_pivots >= segment_budget:
            restart()
            continue

        unused = np.flatnonzero(w <= 0)
        if unused.size == 0:
            unused = np.array([int(np.argmin(w))])
        pz = P[unused] @ z
        j = int(unused[np.argmax(pz)])
        dots = V[j] @ z
        p = int(np.argmin(dots))
        if dots[p] >= P[j] @ z:
            restart()
            continue
        sel[j] = p
        keep = np.flatnonzero((w > 0) & (rows != j))
        warm = (keep, w[keep]) if keep.size else None
        pivots += 1
        seg_pivots += 1

    sel_b, w_b, nz_b = best if best is not None else (sel, np.full(n_cls, 1.0 / n_cls), float("inf"))
    return (ColorfulSelection(sel_b, w_b, nz_b),
            SolverReport(max_iter, pivots, nz_b, SolverStatus.MAX_ITERATIONS, restarts,
                         tuple(tuple(s) for s in segments)))
