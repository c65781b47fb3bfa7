"""Certification of P inside C inside tau*P for point-set hulls.

The achieved factor is the largest gauge of a body point with respect to
hull(P), one small LP per point. This is exact for V-represented hulls and
never enumerates facets.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import asdict, dataclass

import numpy as np

from .bodies import BodySample, gauge_points
from .errors import CertificationError, ParameterError

CONTAINMENT_TOL = 1e-9


@dataclass(frozen=True)
class Certificate:
    achieved_tau: float
    witness_index: int
    containment_ok: bool
    direction_ratio_max: float
    n_dirs: int
    seed: int

    def to_json(self) -> dict:
        return asdict(self)


def _gauges(vertices: np.ndarray, points: np.ndarray) -> np.ndarray:
    return np.array([gauge_points(vertices, c) for c in points])


def direction_ratios(body: BodySample, vertices, n_dirs: int = 1000, seed: int = 0,
                     bins: int = 20):
    """support(C, y) / support(P, y) over seeded unit directions.

    Returns ``(max_ratio, counts, edges)`` with a histogram of the ratios.
    """
    if n_dirs < 1:
        raise ParameterError("n_dirs must be >= 1")
    v = np.atleast_2d(np.asarray(vertices, dtype=float))
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((n_dirs, body.dim))
    y = g / np.linalg.norm(g, axis=1, keepdims=True)
    hc = (body.points @ y.T).max(axis=0)
    hp = (v @ y.T).max(axis=0)
    with np.errstate(divide="ignore"):
        ratios = np.where(hp > 0, hc / hp, np.inf)
    finite = ratios[np.isfinite(ratios)]
    counts, edges = np.histogram(finite, bins=bins) if finite.size else (np.zeros(bins, int), np.zeros(bins + 1))
    return float(ratios.max()), counts, edges


def achieved_factor(body: BodySample, vertices, n_dirs: int = 1000, seed: int = 0) -> Certificate:
    """Smallest tau with C inside tau * hull(vertices), plus the P-inside-C check."""
    v = np.atleast_2d(np.asarray(vertices, dtype=float))
    if v.size == 0:
        raise ParameterError("no vertices to certify")
    if v.shape[1] != body.dim:
        raise ParameterError(f"vertices have width {v.shape[1]}, body has dim {body.dim}")
    g = _gauges(v, body.points)
    if not np.all(np.isfinite(g)):
        bad = int(np.flatnonzero(~np.isfinite(g))[0])
        raise CertificationError(f"origin is not interior to the polytope; body point {bad} is unreachable")
    witness = int(np.argmax(g))  # first index on ties
    inside = _gauges(body.points, v)
    ratio, _, _ = direction_ratios(body, v, n_dirs, seed)
    return Certificate(float(g[witness]), witness, bool(np.all(inside <= 1.0 + CONTAINMENT_TOL)),
                       ratio, n_dirs, seed)


def baseline_net(body: BodySample, tau: float, seed: int = 0) -> np.ndarray:
    """Greedy farthest-gauge selection of body points until C is inside tau*P.

    Starts from a seeded point, grows until the origin is interior, then keeps
    adding the point of largest gauge. Symmetric bodies add +-pairs.
    Gauges only shrink as P grows, so stale values are upper bounds and the
    max is found lazily.
    """
    if tau <= 1.0:
        raise ParameterError(f"tau must exceed 1, got {tau}")
    pts = body.points
    n = pts.shape[0]
    rng = np.random.default_rng(seed)
    index_of = {tuple(p): i for i, p in enumerate(pts.tolist())}
    chosen: list[int] = []
    taken = np.zeros(n, bool)

    def add(i):
        group = [i]
        if body.symmetric:
            group.append(index_of[tuple((-pts[i]).tolist())])
        for j in group:
            if not taken[j]:
                taken[j] = True
                chosen.append(j)

    add(int(rng.integers(n)))
    # grow the cone until it is the whole space
    while True:
        verts = pts[chosen]
        g = _gauges(verts, pts)
        outside = np.flatnonzero(~np.isfinite(g))
        if outside.size == 0:
            break
        centre = verts.mean(axis=0)
        nc = np.linalg.norm(centre)
        if nc == 0.0:
            add(int(outside[0]))
            continue
        cand = pts[outside]
        cos = cand @ centre / (np.linalg.norm(cand, axis=1) * nc)
        add(int(outside[np.argmin(cos)]))

    heap = [(-g[i], i) for i in range(n) if not taken[i]]
    heapq.heapify(heap)
    while heap:
        neg, i = heapq.heappop(heap)
        if taken[i]:
            continue
        cur = gauge_points(pts[chosen], pts[i])
        nxt = -heap[0][0] if heap else -math.inf
        if cur + 1e-12 < nxt:
            heapq.heappush(heap, (-cur, i))
            continue
        if cur <= tau:
            break
        add(i)
    return pts[chosen].copy()
