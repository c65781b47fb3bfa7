"""Thrifty polytope approximation of a point-set body.

Lift every body point to the polynomial feature space, select a few of them
with :func:`select_subset`, and take

    P = conv(X u -X)            for symmetric bodies,
    P = conv(X u (-1/mu) X)     otherwise.

All guarantees are statements about the hull of the given points; to
approximate some other convex body the points must form a fine net of its
boundary.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace

import numpy as np

from .bodies import BodySample, symmetry_mu
from .chebyshev import ApproxParams, min_k, params_for_k
from .errors import ContractViolation, ParameterError, ResourceError
from .lift import LiftedSpace, lifted_dim, parity_for
from .selection import SelectionCertificate, select_subset
from .sparsify import ratio_bound, step_budget
from .verify import Certificate

LIFTED_DIM_CAP = 5000
SCHEMA_VERSION = 1


@dataclass
class ApproxResult:
    body_name: str
    params: ApproxParams
    chosen_indices: np.ndarray
    vertices: np.ndarray
    guaranteed_tau: float
    lifted_rank: int
    selection: SelectionCertificate
    timings_ms: dict = field(default_factory=dict)
    certificate: Certificate | None = None

    @property
    def vertex_count(self) -> int:
        return self.vertices.shape[0]

    def to_json(self) -> dict:
        p = self.params
        return {
            "schema": SCHEMA_VERSION,
            "body_name": self.body_name,
            "dim": p.d,
            "k": p.k,
            "parity": p.parity,
            "mu": p.mu,
            "guaranteed_tau": self.guaranteed_tau,
            "achieved_tau": None if self.certificate is None else self.certificate.achieved_tau,
            "lifted_dim": p.lifted_dim,
            "lifted_rank": self.lifted_rank,
            "vertex_bound": p.vertex_bound,
            "vertex_count": self.vertex_count,
            "vertices": self.vertices.tolist(),
            "chosen_indices": [int(i) for i in self.chosen_indices],
            "residuals": {"john": self.selection.john_residual, "bss_ratio": self.selection.bss_ratio},
            "certificate": None if self.certificate is None else self.certificate.to_json(),
            "timings_ms": self.timings_ms,
        }


def _unique_rows(v: np.ndarray) -> np.ndarray:
    seen, keep = set(), []
    for i, row in enumerate(v.tolist()):
        key = tuple(row)
        if key not in seen:
            seen.add(key)
            keep.append(i)
    return v[keep]


def _run(body: BodySample, k: int, parity: str, mu: float, gamma: float, cap: int) -> ApproxResult:
    dim = lifted_dim(body.dim, k, parity)
    if dim > cap:
        raise ResourceError(f"lifted dimension {dim} exceeds cap {cap}; use a smaller k")
    timings = {}
    t0 = time.perf_counter()
    space = LiftedSpace(body.dim, k, parity)
    lifted = space.lift_points(body.points)
    timings["lift"] = 1e3 * (time.perf_counter() - t0)

    cert = select_subset(lifted, gamma)
    timings.update(cert.timings_ms)

    t0 = time.perf_counter()
    x = body.points[cert.chosen_indices]
    verts = _unique_rows(np.vstack([x, (-1.0 / mu) * x]))
    dilution = math.sqrt(ratio_bound(gamma))
    params = params_for_k(body.dim, k, mu, parity, dilution)
    # 2 * ceil(gamma * D) vertices, i.e. 8 D at gamma = 4
    params = replace(params, vertex_bound=2 * step_budget(gamma, dim))
    timings["assemble"] = 1e3 * (time.perf_counter() - t0)
    return ApproxResult(body.name, params, cert.chosen_indices, verts, params.tau,
                        cert.span_rank, cert, timings)


def approximate_symmetric(body: BodySample, k: int, gamma: float = 4.0,
                          lifted_cap: int = LIFTED_DIM_CAP) -> ApproxResult:
    """P = conv(X u -X) with the parity-reduced lift matching k."""
    if not body.symmetric:
        raise ContractViolation("approximate_symmetric needs a body flagged symmetric")
    if k < 1:
        raise ParameterError("k must be >= 1")
    return _run(body, k, parity_for(k), 1.0, gamma, lifted_cap)


def approximate_general(body: BodySample, k: int, gamma: float = 4.0,
                        lifted_cap: int = LIFTED_DIM_CAP) -> ApproxResult:
    """P = conv(X u (-1/mu) X) with the full lift."""
    if k < 1:
        raise ParameterError("k must be >= 1")
    mu = symmetry_mu(body).inflated
    return _run(body, k, "full", mu, gamma, lifted_cap)


def approximate_to_tau(body: BodySample, tau: float, gamma: float = 4.0,
                       lifted_cap: int = LIFTED_DIM_CAP) -> ApproxResult:
    """Run with the smallest degree whose guarantee is at most ``tau``."""
    if tau <= 1.0:
        raise ParameterError(f"tau must exceed 1, got {tau}")
    mu = 1.0 if body.symmetric else symmetry_mu(body).inflated
    params = min_k(body.dim, tau, mu, dilution=math.sqrt(ratio_bound(gamma)))
    if body.symmetric:
        return approximate_symmetric(body, params.k, gamma, lifted_cap)
    return _run(body, params.k, "full", mu, gamma, lifted_cap)
