"""Thrifty approximation of convex bodies by polytopes with few vertices."""

from .approx import ApproxResult, approximate_general, approximate_symmetric, approximate_to_tau
from .bodies import BodySample, gauge, generate, load_body, save_body, support, symmetry_mu
from .chebyshev import cheb_coeffs, cheb_eval, feasibility, max_tau, min_k
from .lift import LiftedSpace, lifted_dim
from .selection import select_subset
from .verify import Certificate, achieved_factor, baseline_net

__version__ = "0.1.0"
