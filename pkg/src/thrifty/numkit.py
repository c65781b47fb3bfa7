"""Small dense numeric kernels: symmetric eigen-decomposition, span
extraction and a minimum-sum linear program solved by a dense tableau
simplex.

Matrices are plain ``numpy`` float arrays throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation, InfeasibleLP, NumericFailure

RANK_RTOL = 1e-10


@dataclass(frozen=True)
class SpectralSummary:
    eigenvalues: np.ndarray  # ascending
    basis: np.ndarray  # orthonormal columns, basis[:, i] pairs with eigenvalues[i]

    def reconstruct(self) -> np.ndarray:
        return (self.basis * self.eigenvalues) @ self.basis.T


def sym_eigen(m) -> SpectralSummary:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ContractViolation(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ContractViolation("matrix has non-finite entries")
    scale = np.linalg.norm(m)
    if np.linalg.norm(m - m.T) > 1e-12 * max(scale, 1e-300):
        raise ContractViolation("matrix is not symmetric")
    w, q = np.linalg.eigh(0.5 * (m + m.T))
    return SpectralSummary(w, q)


def orthonormal_span(points, rel_tol: float = RANK_RTOL) -> tuple[np.ndarray, int]:
    """Orthonormal basis (as columns) of the span of ``points`` and its rank.

    Singular values below ``rel_tol`` times the largest are treated as zero.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.size == 0:
        raise ContractViolation("orthonormal_span needs at least one point")
    if not np.all(np.isfinite(pts)):
        raise ContractViolation("points have non-finite entries")
    u, s, _ = np.linalg.svd(pts.T, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((pts.shape[1], 0)), 0
    rank = int(np.count_nonzero(s > rel_tol * s[0]))
    return u[:, :rank].copy(), rank


@dataclass(frozen=True)
class LPSolution:
    weights: np.ndarray
    value: float
    basis: tuple[int, ...]
    pivots: int


def _pivot(t: np.ndarray, row: int, col: int) -> None:
    t[row] /= t[row, col]
    colv = t[:, col].copy()
    colv[row] = 0.0
    t -= np.outer(colv, t[row])


def _run_simplex(t, basis, ncols, eps, max_pivots):
    """Bland's-rule simplex on tableau ``t`` (last row = reduced costs,
    last column = rhs). Only the first ``ncols`` columns may enter."""
    m = t.shape[0] - 1
    pivots = 0
    while True:
        rc = t[-1, :ncols]
        entering = np.flatnonzero(rc < -eps)
        if entering.size == 0:
            return pivots
        j = int(entering[0])
        col = t[:m, j]
        pos = np.flatnonzero(col > eps)
        if pos.size == 0:
            raise NumericFailure("minimum-sum LP reported unbounded")
        ratios = t[pos, -1] / col[pos]
        best = ratios.min()
        tied = pos[ratios <= best + eps * max(1.0, abs(best))]
        # Bland: among tied rows leave the smallest basic variable
        r = int(tied[np.argmin([basis[i] for i in tied])])
        _pivot(t, r, j)
        basis[r] = j
        pivots += 1
        if pivots > max_pivots:
            raise NumericFailure(f"simplex exceeded {max_pivots} pivots")


def lp_min_sum(columns, target, tol: float = 1e-9) -> LPSolution:
    """Solve ``min sum(w)`` subject to ``columns @ w = target`` and ``w >= 0``.

    ``columns`` is a (dim, n) array. Raises :class:`InfeasibleLP` when the
    target lies outside the cone generated by the columns.
    """
    a = np.asarray(columns, dtype=float)
    b = np.asarray(target, dtype=float).ravel()
    if a.ndim == 1:
        a = a.reshape(b.size, -1)
    if a.shape[0] != b.size:
        raise ContractViolation(f"columns have {a.shape[0]} rows, target has {b.size}")
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise ContractViolation("LP data has non-finite entries")
    m, n = a.shape
    if not np.any(b):
        return LPSolution(np.zeros(n), 0.0, (), 0)
    if n == 0:
        raise InfeasibleLP("no columns and nonzero target")

    scale = max(1.0, float(np.abs(a).max()))
    eps = 1e-11 * scale
    max_pivots = 50 * (n + m) + 100

    sign = np.where(b < 0, -1.0, 1.0)
    a_s = a * sign[:, None]
    b_s = b * sign

    # phase 1: artificials in columns n..n+m-1
    t = np.zeros((m + 1, n + m + 1))
    t[:m, :n] = a_s
    t[:m, n:n + m] = np.eye(m)
    t[:m, -1] = b_s
    t[-1, :n] = -a_s.sum(axis=0)
    t[-1, -1] = -b_s.sum()
    basis = list(range(n, n + m))
    pivots = _run_simplex(t, basis, n, eps, max_pivots)

    infeas = -t[-1, -1]
    if infeas > tol * max(1.0, float(np.abs(b).sum())):
        raise InfeasibleLP(f"target outside the cone of the columns (phase-1 value {infeas:.3e})")

    # drive artificials out of the basis; rows where that is impossible are redundant
    keep = []
    for i in range(m):
        if basis[i] >= n:
            nz = np.flatnonzero(np.abs(t[i, :n]) > eps)
            if nz.size == 0:
                continue
            _pivot(t, i, int(nz[0]))
            basis[i] = int(nz[0])
            pivots += 1
        keep.append(i)

    t2 = np.zeros((len(keep) + 1, n + 1))
    t2[:-1, :n] = t[keep, :n]
    t2[:-1, -1] = t[keep, -1]
    basis = [basis[i] for i in keep]
    t2[-1, :n] = 1.0 - t2[:-1, :n].sum(axis=0)
    t2[-1, -1] = -t2[:-1, -1].sum()
    pivots += _run_simplex(t2, basis, n, eps, max_pivots)

    w = np.zeros(n)
    cols = np.array(basis, dtype=int)
    # re-solve the basic system from the original data to shed tableau drift
    wb, *_ = np.linalg.lstsq(a[:, cols], b, rcond=None)
    if np.any(wb < -1e-9 * max(1.0, float(np.abs(wb).max()))):
        wb = t2[:-1, -1]
    w[cols] = np.clip(wb, 0.0, None)
    resid = np.abs(a @ w - b).max()
    if resid > 1e-7 * max(1.0, float(np.abs(b).max())):
        raise NumericFailure(f"LP solution residual {resid:.3e} too large")
    order = tuple(sorted(int(c) for c in cols))
    return LPSolution(w, float(w.sum()), order, pivots)
