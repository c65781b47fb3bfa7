"""Pick a few points of a finite set that control every linear functional.

Pipeline: project to the span (rank r), take the John decomposition of the
projected set, sparsify {sqrt(a_i) x_i} with gamma = 4, keep the selected
contact points. For every y,

    max_chosen |<y, p>| <= max_all |<y, p>| <= 3 sqrt(r) max_chosen |<y, p>|

and at most 4 r points are kept. For other gamma the constants become
ceil(gamma r) and sqrt(ratio_bound(gamma) * r).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import ContractViolation, ConvergenceError
from .mvee import john_decomposition
from .numkit import orthonormal_span
from .sparsify import bss_sparsify, ratio_bound, step_budget


@dataclass(frozen=True)
class SelectionCertificate:
    chosen_indices: np.ndarray
    span_rank: int
    dilution_factor: float
    john_residual: float
    john_gap: float
    bss_ratio: float
    gamma: float
    contact_count: int
    combined_weights: np.ndarray  # a_j * beta_j, diagnostics only
    timings_ms: dict = field(default_factory=dict)

    @property
    def cap(self) -> int:
        return step_budget(self.gamma, self.span_rank)


def select_subset(points, gamma: float = 4.0, mvee_tol: float = 1e-8) -> SelectionCertificate:
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.size == 0:
        raise ContractViolation("select_subset needs at least one point")
    basis, r = orthonormal_span(pts)
    if r == 0:
        raise ContractViolation("all points are zero")
    proj = pts @ basis
    t0 = time.perf_counter()
    try:
        john = john_decomposition(proj, tol=mvee_tol)
    except ConvergenceError as exc:
        exc.stage = exc.stage or "john"
        raise
    t1 = time.perf_counter()
    vec = np.sqrt(john.weights)[:, None] * john.contact_points
    sparse = bss_sparsify(vec, gamma)
    t2 = time.perf_counter()
    chosen_contacts = sparse.indices
    chosen = john.indices[chosen_contacts]
    combined = john.weights[chosen_contacts] * sparse.weights
    return SelectionCertificate(
        chosen_indices=chosen,
        span_rank=r,
        dilution_factor=math.sqrt(ratio_bound(gamma)) * math.sqrt(r),
        john_residual=john.residual,
        john_gap=john.gap,
        bss_ratio=sparse.achieved_ratio,
        gamma=float(gamma),
        contact_count=len(john.indices),
        combined_weights=combined,
        timings_ms={"mvee": 1e3 * (t1 - t0), "bss": 1e3 * (t2 - t1)},
    )


def direction_ratios(points, chosen, n_dirs: int = 2000, seed: int = 0) -> np.ndarray:
    """max_all |<y,p>| / max_chosen |<y,p>| for seeded random directions
    drawn in the span of the points."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    basis, r = orthonormal_span(pts)
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((n_dirs, r))
    y = (g / np.linalg.norm(g, axis=1, keepdims=True)) @ basis.T
    full = np.abs(pts @ y.T).max(axis=0)
    sub = np.abs(pts[np.asarray(chosen)] @ y.T).max(axis=0)
    return full / sub
