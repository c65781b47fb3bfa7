"""Deterministic barrier-potential sparsification of an identity
decomposition (Batson-Spielman-Srivastava, "Twice-Ramanujan sparsifiers").

Given v_1..v_n with sum v_i v_i^T = I in R^d and gamma > 1, pick at most
ceil(gamma d) of them with positive weights so that the weighted sum M has
lambda_max(M) / lambda_min(M) <= (gamma + 1 + 2 sqrt(gamma)) / (gamma + 1 - 2 sqrt(gamma)).

Each step adds t v v^T while shifting an upper barrier by delta_u and a lower
barrier by delta_l; a vector is admissible when U(v) <= 1/t <= L(v).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation, ConvergenceError, ParameterError

IDENTITY_TOL = 1e-6
RATIO_SLACK = 1e-6
_KNIFE_EDGE = 1e-12


def ratio_bound(gamma: float) -> float:
    r = math.sqrt(gamma)
    return (gamma + 1.0 + 2.0 * r) / (gamma + 1.0 - 2.0 * r)


def step_budget(gamma: float, d: int) -> int:
    # fractional gamma*d rounds up
    return math.ceil(gamma * d - 1e-12)


@dataclass(frozen=True)
class SparseReweighting:
    indices: np.ndarray
    weights: np.ndarray
    gamma: float
    achieved_ratio: float
    lambda_min: float
    lambda_max: float

    def matrix(self, vectors) -> np.ndarray:
        v = np.asarray(vectors, dtype=float)[self.indices]
        return (v * self.weights[:, None]).T @ v


def _inv_sqrt_psd(s: np.ndarray) -> np.ndarray:
    w, q = np.linalg.eigh(s)
    return (q / np.sqrt(w)) @ q.T


def _barrier_run(v: np.ndarray, gamma: float, steps: int) -> np.ndarray:
    """Returns accumulated (unnormalised) weights per vector."""
    n, d = v.shape
    sg = math.sqrt(gamma)
    delta_l = 1.0
    eps_l = 1.0 / sg
    delta_u = (sg + 1.0) / (sg - 1.0)
    eps_u = (sg - 1.0) / (gamma + sg)
    lower = -d / eps_l
    upper = d / eps_u
    a = np.zeros((d, d))
    beta = np.zeros(n)
    for _ in range(steps):
        lam, q = np.linalg.eigh(a)
        proj2 = (v @ q) ** 2  # (n, d) squared coordinates in A's eigenbasis
        up_new = upper + delta_u
        lo_new = lower + delta_l
        gu_new = 1.0 / (up_new - lam)
        gl_new = 1.0 / (lam - lo_new)
        phi_u_gap = np.sum(1.0 / (upper - lam)) - np.sum(gu_new)
        phi_l_gap = np.sum(gl_new) - np.sum(1.0 / (lam - lower))
        u_score = proj2 @ (gu_new ** 2) / phi_u_gap + proj2 @ gu_new
        l_score = proj2 @ (gl_new ** 2) / phi_l_gap - proj2 @ gl_new
        slack = u_score - l_score
        j = int(np.argmin(slack))  # argmin keeps the smallest index on ties
        uj, lj = u_score[j], l_score[j]
        if lj <= 0.0:
            raise ConvergenceError("lower barrier potential collapsed", stage="bss")
        if slack[j] > _KNIFE_EDGE * max(1.0, abs(lj)):
            raise ConvergenceError(f"no admissible vector (best slack {slack[j]:.3e})", stage="bss")
        # midpoint of the admissible interval for 1/t (collapses to a point on the knife edge)
        inv_t = 0.5 * (uj + lj) if uj <= lj else lj
        t = 1.0 / inv_t
        a += t * np.outer(v[j], v[j])
        a = 0.5 * (a + a.T)
        beta[j] += t
        upper, lower = up_new, lo_new
    return beta


def bss_sparsify(vectors, gamma: float = 4.0) -> SparseReweighting:
    """Select at most ceil(gamma d) vectors with weights beta_j > 0.

    Weights are normalised so the smallest eigenvalue of sum beta_j v_j v_j^T
    equals 1. Repeated selections of a vector (and exact duplicate input
    vectors) are merged by summing weights.
    """
    if gamma <= 1.0:
        raise ParameterError(f"gamma must exceed 1, got {gamma}")
    v = np.atleast_2d(np.asarray(vectors, dtype=float))
    if not np.all(np.isfinite(v)):
        raise ContractViolation("vectors contain NaN or Inf")
    n, d = v.shape
    s = v.T @ v
    dev = float(np.linalg.norm(s - np.eye(d)))
    if dev > IDENTITY_TOL:
        raise ContractViolation(f"vectors do not decompose the identity (residual {dev:.3e})")
    w_evals = np.linalg.eigvalsh(s)
    if w_evals[0] <= 0.5:
        raise ContractViolation("vectors do not span the space")
    vw = v @ _inv_sqrt_psd(s)  # whitened: sum vw vw^T = I exactly
    steps = step_budget(gamma, d)
    bound = ratio_bound(gamma)

    # merge exact duplicates so repeated vectors share one slot
    uniq, first, inverse = np.unique(v, axis=0, return_index=True, return_inverse=True)
    inverse = inverse.ravel()
    if uniq.shape[0] <= steps:
        beta = np.ones(n)
    else:
        order = np.argsort(first)
        rep = first[order]
        # duplicates collapse to sqrt(multiplicity) * v so the decomposition is unchanged
        mult = np.bincount(inverse, minlength=uniq.shape[0])[order]
        rb = _barrier_run(vw[rep] * np.sqrt(mult)[:, None], gamma, steps)
        beta = np.zeros(n)
        beta[rep] = rb * mult

    if beta.size != n:
        raise ContractViolation("internal weight length mismatch")
    # fold duplicate vectors onto their first occurrence
    merged = np.zeros(n)
    np.add.at(merged, first[inverse], beta)
    sel = np.flatnonzero(merged > 0.0)
    wts = merged[sel]
    m = (v[sel] * wts[:, None]).T @ v[sel]
    ev = np.linalg.eigvalsh(0.5 * (m + m.T))
    if ev[0] <= 0.0:
        raise ConvergenceError("selected vectors do not span the space", stage="bss")
    wts = wts / ev[0]
    ratio = float(ev[-1] / ev[0])
    if ratio > bound + RATIO_SLACK:
        raise ConvergenceError(f"spectral ratio {ratio:.6g} exceeds bound {bound:.6g}",
                               residual=ratio, stage="bss")
    return SparseReweighting(sel, wts, float(gamma), ratio, 1.0, ratio)
