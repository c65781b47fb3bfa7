"""Polynomial (tensor-power) feature map in symmetric coordinates.

A point ``x`` in R^d is sent to the vector with one coordinate per monomial
``x^m`` (|m| <= k), scaled by ``sqrt(multinomial(|m|; m))`` so that

    <lift(x), lift(y)> = sum_j <x, y>^j

over the degrees ``j`` kept by the parity choice. This is the symmetric part
of ``1 + x + x(x)x + ... `` without ever forming d**k tensor entries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations_with_replacement

import numpy as np

from .errors import ParameterError

PARITIES = ("full", "even", "odd")
OVERFLOW_LOG_LIMIT = 250.0


def parity_for(k: int) -> str:
    return "even" if k % 2 == 0 else "odd"


def degrees(k: int, parity: str) -> list[int]:
    _check_parity(k, parity)
    if parity == "full":
        return list(range(k + 1))
    return list(range(k % 2, k + 1, 2))


def _check_parity(k: int, parity: str) -> None:
    if parity not in PARITIES:
        raise ParameterError(f"unknown parity {parity!r}")
    if parity == "even" and k % 2:
        raise ParameterError(f"parity 'even' needs an even degree, got k={k}")
    if parity == "odd" and not k % 2:
        raise ParameterError(f"parity 'odd' needs an odd degree, got k={k}")


def lifted_dim(d: int, k: int, parity: str = "full") -> int:
    """Exact dimension of the lifted space.

    ``full`` gives binom(d+k, k); ``even``/``odd`` give
    sum_{m <= k/2} binom(d+k-1-2m, k-2m).
    """
    if d < 1 or k < 1:
        raise ParameterError(f"need d >= 1 and k >= 1, got d={d}, k={k}")
    _check_parity(k, parity)
    if parity == "full":
        return math.comb(d + k, k)
    return sum(math.comb(d + k - 1 - 2 * m, k - 2 * m) for m in range(k // 2 + 1))


@dataclass(frozen=True)
class LiftedSpace:
    dim_d: int
    degree_k: int
    parity: str = "full"
    exponents: np.ndarray = field(init=False, repr=False)
    degree_of: np.ndarray = field(init=False, repr=False)
    scalings: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        d, k = self.dim_d, self.degree_k
        if d < 1 or k < 1:
            raise ParameterError(f"need d >= 1 and k >= 1, got d={d}, k={k}")
        rows, degs, scal = [], [], []
        # graded lexicographic: by degree, then lexicographically largest exponent first
        for j in degrees(k, self.parity):
            for combo in combinations_with_replacement(range(d), j):
                m = np.bincount(np.array(combo, dtype=int), minlength=d) if j else np.zeros(d, int)
                rows.append(m)
                degs.append(j)
                multinom = math.factorial(j)
                for e in m:
                    multinom //= math.factorial(int(e))
                scal.append(math.sqrt(multinom))
        object.__setattr__(self, "exponents", np.array(rows, dtype=int).reshape(-1, d))
        object.__setattr__(self, "degree_of", np.array(degs, dtype=int))
        object.__setattr__(self, "scalings", np.array(scal, dtype=float))

    @property
    def dim(self) -> int:
        return len(self.degree_of)

    def index_table(self) -> list[tuple[int, ...]]:
        return [tuple(int(e) for e in row) for row in self.exponents]

    def _monomials(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        if x.shape[1] != self.dim_d:
            raise ParameterError(f"expected {self.dim_d}-vectors, got width {x.shape[1]}")
        if not np.all(np.isfinite(x)):
            raise ParameterError("non-finite coordinates")
        big = float(np.abs(x).max()) if x.size else 0.0
        if big > 1.0 and self.degree_k * math.log(big) > OVERFLOW_LOG_LIMIT:
            raise ParameterError("coordinates too large for the lift degree (overflow guard)")
        out = np.empty((x.shape[0], self.dim))
        chunk = max(1, int(4_000_000 // max(1, self.dim * self.dim_d)))
        for s in range(0, x.shape[0], chunk):
            xs = x[s:s + chunk]
            out[s:s + chunk] = np.prod(xs[:, None, :] ** self.exponents[None, :, :], axis=2)
        return out

    def lift_points(self, x) -> np.ndarray:
        """Lift each row of ``x``; returns an (n, dim) array."""
        return self._monomials(x) * self.scalings

    def lift_point(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.ndim != 1:
            raise ParameterError("lift_point takes a single vector")
        return self.lift_points(x[None, :])[0]

    def lift_functional(self, y, poly_coeffs) -> np.ndarray:
        """Coordinates of a(y) in the lifted space, ``a`` given by monomial
        coefficients alpha_0..alpha_k.

        Pairing with ``lift_point(x)`` gives ``sum_j alpha_j <x, y>^j``.
        """
        a = np.zeros(self.degree_k + 1)
        c = np.asarray(poly_coeffs, dtype=float).ravel()
        if c.size > self.degree_k + 1:
            if np.any(c[self.degree_k + 1:]):
                raise ParameterError("polynomial degree exceeds the lift degree")
            c = c[: self.degree_k + 1]
        a[: c.size] = c
        allowed = set(degrees(self.degree_k, self.parity))
        bad = [j for j in range(self.degree_k + 1) if a[j] != 0.0 and j not in allowed]
        if bad:
            raise ParameterError(f"coefficients at degrees {bad} are excluded by parity {self.parity!r}")
        y = np.asarray(y, dtype=float)
        return a[self.degree_of] * self.lift_point(y)
