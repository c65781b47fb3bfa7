"""Convex bodies given as finite point sets (the body is their hull)."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import ContractViolation, InfeasibleLP, ParameterError
from .numkit import lp_min_sum, orthonormal_span

MU_INFLATION = 1.0 + 1e-9
KINDS = ("ball_sample", "cube", "cross_polytope", "simplex", "random_symmetric", "ellipsoid_sample")


@dataclass(frozen=True)
class BodySample:
    name: str
    dim: int
    points: np.ndarray  # (n, dim)
    symmetric: bool = False

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != self.dim:
            raise ContractViolation(f"points must be an (n, {self.dim}) array, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise ContractViolation("points contain NaN or Inf")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        if pts.shape[0] < self.dim + 1:
            raise ContractViolation(f"need at least {self.dim + 1} points, got {pts.shape[0]}")
        _, rank = orthonormal_span(pts)
        if rank < self.dim:
            raise ContractViolation(f"points span only {rank} of {self.dim} dimensions")
        if self.symmetric and not _closed_under_negation(pts):
            raise ContractViolation("symmetric flag set but the point set is not closed under negation")
        if not origin_interior(pts):
            raise ContractViolation("origin is not interior to the convex hull")

    @property
    def n(self) -> int:
        return self.points.shape[0]

    def to_json(self) -> dict:
        return {"name": self.name, "dim": self.dim, "symmetric": self.symmetric,
                "points": self.points.tolist()}


def _closed_under_negation(pts: np.ndarray) -> bool:
    keys = {tuple(p) for p in pts.tolist()}
    return all(tuple(-v for v in p) in keys for p in pts.tolist())


def origin_interior(pts: np.ndarray) -> bool:
    """True iff 0 is a strictly positive combination of the points.

    Together with full rank this puts the origin in the hull's interior.
    Solved as w = 1 + s, s >= 0: sum s_i p_i = -sum p_i.
    """
    pts = np.asarray(pts, dtype=float)
    try:
        lp_min_sum(pts.T, -pts.sum(axis=0))
    except InfeasibleLP:
        return False
    return True


@dataclass(frozen=True)
class SymmetryCoefficient:
    mu: float
    witness: int

    @property
    def inflated(self) -> float:
        """mu padded against gauge round-off, for use in the shifted polynomial."""
        return 1.0 if self.mu == 1.0 and self.witness < 0 else self.mu * MU_INFLATION


def support(body: BodySample, y) -> float:
    y = np.asarray(y, dtype=float)
    return float((body.points @ y).max())


def gauge_points(points: np.ndarray, c) -> float:
    """Minkowski functional of hull(points) at c; inf if c is outside the cone."""
    c = np.asarray(c, dtype=float)
    if not np.any(c):
        return 0.0
    try:
        return lp_min_sum(np.asarray(points, dtype=float).T, c).value
    except InfeasibleLP:
        return math.inf


def gauge(body: BodySample, c) -> float:
    return gauge_points(body.points, c)


def symmetry_mu(body: BodySample) -> SymmetryCoefficient:
    """Smallest mu >= 1 with -C inside mu*C, and the point attaining it.

    Symmetric bodies short-circuit to mu = 1 with witness -1.
    """
    if body.symmetric:
        return SymmetryCoefficient(1.0, -1)
    vals = np.array([gauge(body, -p) for p in body.points])
    i = int(np.argmax(vals))
    return SymmetryCoefficient(max(1.0, float(vals[i])), i)


def _ball(dim, n, rng):
    if n < 2 * dim or n % 2:
        raise ParameterError(f"ball_sample needs an even n >= {2 * dim}, got {n}")
    g = rng.standard_normal((n // 2, dim))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return np.vstack([g, -g])


def _regular_simplex(dim):
    e = np.eye(dim + 1) - 1.0 / (dim + 1)
    # orthonormal basis of the hyperplane sum = 0
    q, _ = np.linalg.qr(e[:, :dim])
    v = e @ q
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def generate(kind: str, dim: int, n: int | None = None, seed: int = 0) -> BodySample:
    """Deterministic body generators used by tests, the CLI and benchmarks."""
    if dim < 1:
        raise ParameterError("dim must be >= 1")
    rng = np.random.default_rng(seed)
    if kind == "cube":
        if dim > 20:
            raise ParameterError("cube vertex count explodes beyond dim 20")
        pts = np.array(list(product((1.0, -1.0), repeat=dim)))
        return BodySample(f"cube{dim}", dim, pts, True)
    if kind == "cross_polytope":
        eye = np.eye(dim)
        return BodySample(f"cross{dim}", dim, np.vstack([eye, -eye]), True)
    if kind == "simplex":
        return BodySample(f"simplex{dim}", dim, _regular_simplex(dim), False)
    if kind == "ball_sample":
        n = n if n is not None else 20 * dim
        return BodySample(f"ball{dim}_n{n}_s{seed}", dim, _ball(dim, n, rng), True)
    if kind == "random_symmetric":
        n = n if n is not None else 20 * dim
        if n < 2 * dim or n % 2:
            raise ParameterError(f"random_symmetric needs an even n >= {2 * dim}, got {n}")
        g = rng.standard_normal((n // 2, dim))
        return BodySample(f"randsym{dim}_n{n}_s{seed}", dim, np.vstack([g, -g]), True)
    if kind == "ellipsoid_sample":
        n = n if n is not None else 20 * dim
        pts = _ball(dim, n, rng)
        a = rng.standard_normal((dim, dim)) + 2.0 * np.eye(dim)
        while abs(np.linalg.det(a)) < 1e-3:
            a = a + np.eye(dim)
        return BodySample(f"ellipsoid{dim}_n{n}_s{seed}", dim, pts @ a.T, True)
    raise ParameterError(f"unknown body kind {kind!r}; choose from {', '.join(KINDS)}")


def _reject_constant(tok):
    raise ParameterError(f"non-finite number {tok} in body file")


def loads_body(text: str) -> BodySample:
    try:
        obj = json.loads(text, parse_constant=_reject_constant)
        pts = obj["points"]
        dim = int(obj["dim"])
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ParameterError):
            raise
        raise ParameterError(f"malformed body JSON: {exc}") from exc
    if any(len(p) != dim for p in pts):
        raise ParameterError(f"every point must have length dim={dim}")
    return BodySample(str(obj.get("name", "body")), dim, np.array(pts, dtype=float).reshape(-1, dim),
                      bool(obj.get("symmetric", False)))


def load_body(path) -> BodySample:
    with open(path) as fh:
        return loads_body(fh.read())


def save_body(body: BodySample, path) -> None:
    with open(path, "w") as fh:
        json.dump(body.to_json(), fh, allow_nan=False)
        fh.write("\n")
