"""Chebyshev polynomials, their shifted variant and the degree/factor
calculator behind the approximation guarantees.

The guarantee for a body in R^d at degree k and factor tau reads

    2 * T_k(lam) >= 6 * sqrt(D)

with ``lam = 2 tau/(mu+1) + (mu-1)/(mu+1)`` (``lam = tau`` for symmetric
bodies) and ``D`` the lifted dimension. The polytope then has at most
``8 D`` vertices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .lift import lifted_dim, parity_for

K_CAP = 64
DILUTION = 3.0
TAU_FLOOR = 1.0 + 1e-12
_BIG_INT = 2 ** 63


@dataclass(frozen=True)
class ChebCoeffs:
    degree: int
    coeffs: tuple[int, ...]  # monomial coefficients alpha_0..alpha_k

    def as_array(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=float)


@dataclass(frozen=True)
class Feasibility:
    ok: bool
    margin: float
    lhs: float
    rhs: float


@dataclass(frozen=True)
class ApproxParams:
    d: int
    k: int
    tau: float
    mu: float
    lam: float
    parity: str
    lifted_dim: int
    vertex_bound: int
    margin: float


def _surd(t: float) -> float:
    # sqrt(t^2 - 1) factored to stay accurate near t = 1
    return math.sqrt(t - 1.0) * math.sqrt(t + 1.0)


def cheb_eval(k: int, t: float) -> float:
    """T_k(t): cosine form on [-1, 1], surd form outside."""
    if k < 0:
        raise ParameterError("degree must be non-negative")
    t = float(t)
    if -1.0 <= t <= 1.0:
        return math.cos(k * math.acos(t))
    sign = 1.0
    if t < 0:
        t = -t
        sign = -1.0 if k % 2 else 1.0
    s = _surd(t)
    try:
        val = 0.5 * ((t - s) ** k + (t + s) ** k)
    except OverflowError:
        val = math.inf
    return sign * val


def log_cheb(k: int, t: float) -> float:
    """log T_k(t) for t >= 1, finite where T_k itself would overflow."""
    if t < 1.0:
        raise ParameterError("log_cheb needs t >= 1")
    s = _surd(t)
    big = t + s
    # (t - s) = 1 / (t + s), so T_k = (t + s)^k (1 + (t + s)^(-2k)) / 2
    return k * math.log(big) - math.log(2.0) + math.log1p(big ** (-2.0 * k))


def cheb_coeffs(k: int) -> ChebCoeffs:
    """Exact integer monomial coefficients of T_k via T_{j+1} = 2t T_j - T_{j-1}."""
    if k < 0:
        raise ParameterError("degree must be non-negative")
    prev, cur = [1], [0, 1]
    if k == 0:
        return ChebCoeffs(0, (1,))
    for _ in range(k - 1):
        nxt = [0] + [2 * c for c in cur]
        for i, c in enumerate(prev):
            nxt[i] -= c
        prev, cur = cur, nxt
    return ChebCoeffs(k, tuple(cur))


def growth_bound(k: int, t: float) -> float:
    """Half-sum of surd powers, i.e. T_k(t) for t >= 1; strictly increasing."""
    if t < 1.0:
        raise ParameterError(f"growth_bound needs t >= 1, got {t}")
    return cheb_eval(k, t)


def shift_lambda(tau: float, mu: float) -> float:
    return 2.0 / (mu + 1.0) * tau + (mu - 1.0) / (mu + 1.0)


def tau_from_lambda(lam: float, mu: float) -> float:
    return ((mu + 1.0) * lam - (mu - 1.0)) / 2.0


def s_eval(k: int, mu: float, t: float) -> float:
    """S_k(t) = T_k applied after the affine map sending [-mu, 1] onto [-1, 1]."""
    if mu < 1.0:
        raise ParameterError("mu must be >= 1")
    return cheb_eval(k, shift_lambda(t, mu))


def s_coeffs(k: int, mu: float) -> np.ndarray:
    """Monomial coefficients of S_k (float; mixed parity unless mu == 1)."""
    base = np.polynomial.Polynomial(cheb_coeffs(k).as_array())
    inner = np.polynomial.Polynomial([(mu - 1.0) / (mu + 1.0), 2.0 / (mu + 1.0)])
    out = np.zeros(k + 1)
    c = base(inner).coef
    out[: c.size] = c
    return out


def _resolve_parity(k: int, mu: float, parity: str | None) -> str:
    if parity is None or parity == "auto":
        return parity_for(k) if mu == 1.0 else "full"
    if parity != "full" and mu != 1.0:
        raise ParameterError("parity-reduced lifts are only valid for symmetric bodies (mu = 1)")
    return parity


def feasibility(d: int, k: int, tau: float, mu: float = 1.0, parity: str | None = "full",
                dilution: float = DILUTION) -> Feasibility:
    """Check 2 T_k(lam(tau, mu)) >= 2 * dilution * sqrt(D(d, k, parity)).

    ``dilution`` is the selection factor per unit sqrt-dimension (3 for gamma = 4).
    """
    if tau <= 1.0:
        raise ParameterError(f"tau must exceed 1, got {tau}")
    if mu < 1.0:
        raise ParameterError(f"mu must be >= 1, got {mu}")
    parity = _resolve_parity(k, mu, parity)
    dim = lifted_dim(d, k, parity)
    lam = shift_lambda(tau, mu)
    lhs = 2.0 * cheb_eval(k, lam)
    if dim < _BIG_INT:
        rhs = 2.0 * dilution * math.sqrt(dim)
    else:
        rhs = math.exp(math.log(2.0 * dilution) + 0.5 * math.log(dim)) if math.log(dim) < 1400 else math.inf
    if math.isfinite(lhs) and math.isfinite(rhs) and dim < _BIG_INT:
        ok = lhs >= rhs
    else:
        ok = log_cheb(k, lam) >= math.log(dilution) + 0.5 * math.log(dim)
    return Feasibility(ok, lhs - rhs, lhs, rhs)


def _max_lambda(d: int, k: int, parity: str, dilution: float) -> float:
    dim = lifted_dim(d, k, parity)
    target_log = math.log(dilution) + 0.5 * math.log(dim)  # log T_k(lam) at equality
    if target_log <= 0.0:
        return TAU_FLOOR
    lo, hi = 1.0, 2.0
    while log_cheb(k, hi) < target_log:
        lo, hi = hi, 2.0 * hi
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if log_cheb(k, mid) >= target_log:
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-13 * hi:
            break
    return hi


def max_tau(d: int, k: int, mu: float = 1.0, parity: str | None = "auto",
            dilution: float = DILUTION) -> float:
    """Smallest tau satisfying the degree-k condition (the certified factor
    for degree k), clamped below at 1 + 1e-12."""
    if k < 1:
        raise ParameterError("k must be >= 1")
    parity = _resolve_parity(k, mu, parity)
    lam = _max_lambda(d, k, parity, dilution)
    tau = tau_from_lambda(lam, mu)
    return max(tau, TAU_FLOOR)


def min_k(d: int, tau: float, mu: float = 1.0, k_cap: int = K_CAP,
          dilution: float = DILUTION, vertex_factor: int = 8) -> ApproxParams:
    """Smallest degree k <= k_cap whose condition holds at factor tau.

    Uses the parity-reduced dimension when mu == 1.
    """
    if tau <= 1.0:
        raise ParameterError(f"tau must exceed 1, got {tau}")
    best = -math.inf
    for k in range(1, k_cap + 1):
        parity = _resolve_parity(k, mu, "auto")
        f = feasibility(d, k, tau, mu, parity, dilution)
        if f.ok:
            dim = lifted_dim(d, k, parity)
            return ApproxParams(d, k, float(tau), float(mu), shift_lambda(tau, mu),
                                parity, dim, vertex_factor * dim, f.margin)
        best = max(best, f.margin)
    raise ParameterError(f"no degree k <= {k_cap} certifies tau={tau} (best margin {best:.4g}); increase tau")


def params_for_k(d: int, k: int, mu: float = 1.0, parity: str | None = "auto",
                 dilution: float = DILUTION, vertex_factor: int = 8) -> ApproxParams:
    """ApproxParams at degree k with tau set to the certified factor."""
    parity = _resolve_parity(k, mu, parity)
    tau = max_tau(d, k, mu, parity, dilution)
    dim = lifted_dim(d, k, parity)
    lam = shift_lambda(tau, mu)
    margin = 2.0 * cheb_eval(k, lam) - 2.0 * dilution * math.sqrt(dim)
    return ApproxParams(d, k, tau, float(mu), lam, parity, dim, vertex_factor * dim, margin)
