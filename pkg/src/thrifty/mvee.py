"""Minimum-volume origin-centred ellipsoid and the John decomposition.

The ellipsoid {x : x^T m x <= 1} is found through the dual weights u on the
points (u >= 0, sum u = 1) maximising log det(sum u_i x_i x_i^T). We use the
Wolfe-Atwood variant of Khachiyan's coordinate ascent (Todd & Yildirim):
toward-steps on the most violated point plus away/drop steps on the least
tight supported point, which converges linearly and zeroes the weight of
interior points exactly. When the support is large and nearly dependent the
linear rate is painfully slow, so once the gap is small we also take Newton
steps on the current support.

Because x and -x give the same outer product, the centred problem is already
symmetric; no explicit mirrored copies of the points are needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation, ConvergenceError
from .numkit import orthonormal_span

CONTACT_RTOL = 1e-12
_REFRESH_EVERY = 200
_POLISH_BELOW = 1e-3  # start Newton polishing once the gap is this small


@dataclass(frozen=True)
class CenteredEllipsoid:
    m: np.ndarray
    sqrt_m: np.ndarray

    def contains(self, points, tol: float = 1e-8) -> bool:
        pts = np.atleast_2d(points)
        return bool(np.all(np.einsum("ij,jk,ik->i", pts, self.m, pts) <= 1.0 + tol))


@dataclass(frozen=True)
class MVEEResult:
    ellipsoid: CenteredEllipsoid
    u: np.ndarray  # dual weights over the input points (duplicates share)
    gap: float  # max(eps_plus, eps_minus), the relative duality measure
    iterations: int


@dataclass(frozen=True)
class JohnDecomposition:
    indices: np.ndarray
    contact_points: np.ndarray  # (len(indices), dim), rows are unit vectors
    weights: np.ndarray
    ellipsoid: CenteredEllipsoid
    residual: float  # Frobenius norm of sum a_i x_i x_i^T - I
    gap: float

    @property
    def dim(self) -> int:
        return self.contact_points.shape[1]


def _merge_duplicates(x: np.ndarray):
    uniq, first, inverse = np.unique(x, axis=0, return_index=True, return_inverse=True)
    order = np.argsort(first)  # keep first-occurrence order for determinism
    rank = np.empty_like(order)
    rank[order] = np.arange(order.size)
    return uniq[order], first[order], rank[inverse.ravel()]


def _logdet(x, u):
    sign, val = np.linalg.slogdet((x * u[:, None]).T @ x)
    return val if sign > 0 else -math.inf


def _newton_polish(x: np.ndarray, u: np.ndarray, tol: float, steps: int = 40) -> np.ndarray:
    """Newton ascent of log det X(u) restricted to the current support.

    First-order steps crawl when many nearly dependent points share the
    boundary; on a fixed support the problem is smooth and Newton is
    quadratic. Points whose weight hits zero leave the support.
    """
    u = u.copy()
    f = _logdet(x, u)
    for _ in range(steps):
        s = np.flatnonzero(u > 0.0)
        xs = x[s]
        minv = np.linalg.inv((xs * u[s, None]).T @ xs)
        k = xs @ minv @ xs.T
        g = np.diag(k).copy()
        h = k * k
        m = s.size
        kkt = np.zeros((m + 1, m + 1))
        kkt[:m, :m] = h
        kkt[:m, m] = kkt[m, :m] = 1.0
        rhs = np.append(g, 0.0)
        step = np.linalg.lstsq(kkt, rhs, rcond=None)[0][:m]
        slope = float(g @ step)
        if not np.isfinite(slope) or slope <= 0.0:
            break
        neg = np.flatnonzero(step < 0.0)
        t_max, block = math.inf, -1
        if neg.size:
            ratios = -u[s[neg]] / step[neg]
            t_max, block = float(ratios.min()), int(s[neg[np.argmin(ratios)]])
        t = min(1.0, t_max)
        while t > 1e-12:
            trial = u.copy()
            trial[s] += t * step
            if t == t_max:
                trial[block] = 0.0
            trial = np.maximum(trial, 0.0)
            trial /= trial.sum()
            ft = _logdet(x, trial)
            if ft >= f + 1e-4 * t * slope:
                break
            t *= 0.5
        else:
            break
        u, f = trial, ft
        spread = g.max() - g.min()
        if spread <= tol * x.shape[1]:
            break
    return u


def _khachiyan(x: np.ndarray, tol: float, max_iter: int):
    n, dim = x.shape
    u = np.full(n, 1.0 / n)
    it = 0

    def refresh(u):
        xu = (x * u[:, None]).T @ x
        minv = np.linalg.inv(xu)
        minv = 0.5 * (minv + minv.T)
        g = np.einsum("ij,jk,ik->i", x, minv, x)
        return minv, g

    minv, g = refresh(u)
    since = 0
    polished_at = math.inf
    while True:
        j = int(np.argmax(g))
        eps_plus = g[j] / dim - 1.0
        active = np.flatnonzero(u > 0.0)
        i = int(active[np.argmin(g[active])])
        eps_minus = 1.0 - g[i] / dim
        if max(eps_plus, eps_minus) <= tol:
            # confirm against a fresh inverse before stopping
            minv, g = refresh(u)
            since = 0
            j = int(np.argmax(g))
            eps_plus = g[j] / dim - 1.0
            active = np.flatnonzero(u > 0.0)
            i = int(active[np.argmin(g[active])])
            eps_minus = 1.0 - g[i] / dim
            if max(eps_plus, eps_minus) <= tol:
                return u, minv, g, max(eps_plus, eps_minus, 0.0), it
        if it >= max_iter:
            raise ConvergenceError(
                f"MVEE did not converge in {max_iter} iterations (gap {max(eps_plus, eps_minus):.3e})",
                residual=max(eps_plus, eps_minus), stage="mvee")
        it += 1
        if eps_plus >= eps_minus:
            idx, gk = j, g[j]
            lam = (gk - dim) / (dim * (gk - 1.0))
        else:
            idx, gk = i, g[i]
            lam_max = u[i] / (1.0 - u[i]) if u[i] < 1.0 else 0.0
            lam = (dim - gk) / (dim * (gk - 1.0)) if gk > 1.0 else lam_max
            lam = -min(lam, lam_max)
        # X(u') = (1 - lam) X(u) + lam x x^T, Sherman-Morrison on the inverse
        xi = x[idx]
        mx = minv @ xi
        denom = (1.0 - lam) + lam * gk
        if denom <= 0.0 or 1.0 - lam <= 0.0:
            minv, g = refresh(u)
            since = 0
            continue
        minv = (minv - (lam / denom) * np.outer(mx, mx)) / (1.0 - lam)
        g = (g - (lam / denom) * (x @ mx) ** 2) / (1.0 - lam)
        u *= 1.0 - lam
        u[idx] += lam
        if u[idx] < 1e-300:
            u[idx] = 0.0
        since += 1
        if since >= _REFRESH_EVERY:
            gap = max(eps_plus, eps_minus)
            if gap < _POLISH_BELOW and gap < 0.5 * polished_at:
                u = _newton_polish(x, u, tol)
                polished_at = gap
            minv, g = refresh(u)
            since = 0


def centered_mvee(points, tol: float = 1e-8, max_iter: int | None = None) -> MVEEResult:
    """Minimum-volume ellipsoid centred at 0 containing ``points``.

    The returned form is scaled by the final max of x^T m x, so every input
    point satisfies x^T m x <= 1 up to rounding; the dual gap bounds how far
    the supported points sit from the boundary.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if not np.all(np.isfinite(pts)):
        raise ContractViolation("points contain NaN or Inf")
    n, dim = pts.shape
    _, rank = orthonormal_span(pts)
    if rank < dim:
        raise ContractViolation(f"points span {rank} < {dim} dimensions; project to the span first")
    uniq, first, back = _merge_duplicates(pts)
    if max_iter is None:
        max_iter = int(100 * uniq.shape[0] * max(1.0, math.log(dim + 1))) + 10_000
    # sum of John weights drifts from dim by about dim * gap
    u, minv, g, gap, it = _khachiyan(uniq, min(tol, 1e-7 / dim), max_iter)
    gmax = float(g.max())
    m = minv / gmax
    m = 0.5 * (m + m.T)
    w, q = np.linalg.eigh(m)
    if w[0] <= 0.0:
        raise ConvergenceError("ellipsoid form lost positive definiteness", residual=float(w[0]), stage="mvee")
    sqrt_m = (q * np.sqrt(w)) @ q.T
    # spread merged weight evenly over duplicates
    counts = np.bincount(back, minlength=uniq.shape[0])
    u_full = u[back] / counts[back]
    return MVEEResult(CenteredEllipsoid(m, 0.5 * (sqrt_m + sqrt_m.T)), u_full, gap, it)


def john_decomposition(points, tol: float = 1e-8, max_iter: int | None = None,
                       residual_cap: float = 1e-6) -> JohnDecomposition:
    """Contact points and weights with sum a_i x_i x_i^T = I.

    Contacts are sqrt_m applied to the supported input points. Weights are
    ``gmax * u_i``, which makes the identity exact for the scaled form
    (up to rounding), whatever the remaining duality gap.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    res = centered_mvee(pts, tol, max_iter)
    dim = pts.shape[1]
    u = res.u
    keep = np.flatnonzero(u > CONTACT_RTOL * u.max())
    ell = res.ellipsoid
    z = pts[keep] @ ell.sqrt_m  # sqrt_m symmetric
    # weights a_i with sum a_i z_i z_i^T = I: a = u / sum u_j z_j z_j^T scale
    s = (z * u[keep, None]).T @ z
    scale = float(np.trace(s)) / dim
    a = u[keep] / scale
    resid = float(np.linalg.norm((z * a[:, None]).T @ z - np.eye(dim)))
    if resid > residual_cap:
        raise ConvergenceError(f"John decomposition residual {resid:.3e} exceeds {residual_cap:g}",
                               residual=resid, stage="john")
    return JohnDecomposition(keep, z, a, ell, resid, res.gap)
