import cmath
import math

import numpy as np
import pytest
from scipy.optimize import brentq

from oracles import cheb_closed_form, cheb_numpy, count_monomials, min_k_bruteforce
from thrifty.chebyshev import (cheb_coeffs, cheb_eval, feasibility, growth_bound, log_cheb,
                               max_tau, min_k, s_coeffs, s_eval, shift_lambda, tau_from_lambda)
from thrifty.errors import ParameterError


@pytest.mark.parametrize("k, t, want", [(4, 0.0, 1.0), (2, 1.0, 1.0), (3, 2.0, 26.0)])
def test_cheb_eval_examples(k, t, want):
    assert cheb_eval(k, t) == pytest.approx(want, abs=1e-12)


def test_listed_polynomials():
    assert cheb_coeffs(1).coeffs == (0, 1)
    assert cheb_coeffs(2).coeffs == (-1, 0, 2)
    assert cheb_coeffs(3).coeffs == (0, -3, 0, 4)
    assert cheb_coeffs(4).coeffs == (1, 0, -8, 0, 8)
    assert cheb_coeffs(5).coeffs == (0, 5, 0, -20, 0, 16)


@pytest.mark.parametrize("k", range(1, 21))
def test_coeffs_match_factorial_formula(k):
    assert list(cheb_coeffs(k).coeffs) == cheb_closed_form(k)
    c = cheb_coeffs(k).coeffs
    assert all(c[j] == 0 for j in range(k + 1) if (k - j) % 2)


def test_bounded_on_interval():
    grid = np.linspace(-1, 1, 10001)
    for k in range(21):
        assert max(abs(cheb_eval(k, t)) for t in grid) <= 1 + 1e-12


def test_recurrence():
    for k in range(1, 20):
        for t in np.linspace(-5, 5, 41):
            lhs = cheb_eval(k + 1, t)
            rhs = 2 * t * cheb_eval(k, t) - cheb_eval(k - 1, t)
            assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(lhs))


def test_matches_clenshaw_outside_interval():
    for k in range(0, 15):
        for t in (-3.3, -1.2, 1.0001, 2.5, 7.0):
            assert cheb_eval(k, t) == pytest.approx(cheb_numpy(k, t), rel=1e-10)


def _surd_complex(k, t):
    s = cmath.sqrt(t * t - 1)
    return (0.5 * ((t - s) ** k + (t + s) ** k)).real


def _cos_complex(k, t):
    return cmath.cos(k * cmath.acos(t)).real


@pytest.mark.parametrize("k", [1, 2, 5, 12, 20])
def test_surd_cosine_consistency(k):
    for sign in (1.0, -1.0):
        inside = sign * (1 - 1e-9)
        outside = sign * (1 + 1e-9)
        assert abs(cheb_eval(k, inside) - _surd_complex(k, inside)) <= 1e-7
        assert abs(cheb_eval(k, outside) - _cos_complex(k, outside)) <= 1e-7
        assert abs(cheb_eval(k, sign) - _surd_complex(k, sign)) <= 1e-12


def test_growth_bound_examples():
    for k in range(1, 10):
        assert growth_bound(k, 1.0) == 1.0
    assert growth_bound(3, 3.18) == pytest.approx(4 * 3.18**3 - 3 * 3.18, rel=1e-14)
    assert growth_bound(3, 3.18) == pytest.approx(119.1, abs=0.05)
    assert growth_bound(6, 2.0) == pytest.approx(1351, rel=1e-13)
    with pytest.raises(ParameterError):
        growth_bound(3, 0.5)


def test_growth_bound_monotone():
    ts = np.linspace(1, 10, 2001)
    for k in range(1, 21):
        vals = [growth_bound(k, t) for t in ts]
        assert all(b > a for a, b in zip(vals, vals[1:]))


def test_log_cheb_consistent():
    for k in (1, 4, 9):
        for t in (1.0, 1.5, 4.0):
            assert log_cheb(k, t) == pytest.approx(math.log(cheb_eval(k, t)), abs=1e-12)
    assert math.isfinite(log_cheb(64, 1e10))


def test_s_eval():
    for k in range(1, 8):
        for t in np.linspace(-3, 3, 13):
            assert s_eval(k, 1.0, t) == pytest.approx(cheb_eval(k, t), rel=1e-14, abs=1e-14)
        assert s_eval(k, 3.7, 1.0) == pytest.approx(1.0)
    assert s_eval(2, 3.0, -3.0) == pytest.approx(1.0)


@pytest.mark.parametrize("mu", [1.0, 2.0, 5.0, 10.0])
def test_s_eval_bounded_on_shifted_interval(mu):
    grid = np.linspace(-mu, 1, 2001)
    for k in range(1, 13):
        assert max(abs(s_eval(k, mu, t)) for t in grid) <= 1 + 1e-12


@pytest.mark.parametrize("tau, mu", [(1.5, 2.0), (3.0, 4.0), (1.1, 1.0)])
def test_s_eval_exceeds_growth_beyond_tau(tau, mu):
    lam = shift_lambda(tau, mu)
    for k in range(1, 10):
        for t in (tau + 1e-6, tau + 0.3, 2 * tau):
            assert abs(s_eval(k, mu, t)) > growth_bound(k, lam)


def test_s_coeffs_match_evaluation():
    for k in (1, 3, 4):
        c = s_coeffs(k, 2.5)
        for t in (-2.0, 0.3, 1.7):
            assert np.polynomial.polynomial.polyval(t, c) == pytest.approx(s_eval(k, 2.5, t), rel=1e-10)


def test_lambda_inversion():
    assert shift_lambda(3.0, 2.0) == pytest.approx(7 / 3)
    assert tau_from_lambda(7 / 3, 2.0) == pytest.approx(3.0)


def test_feasibility_examples():
    f = feasibility(20, 3, 3.18, 1.0, "odd")
    assert f.ok
    assert f.lhs == pytest.approx(238.18, abs=0.01)
    assert f.rhs == pytest.approx(6 * math.sqrt(1560))
    f2 = feasibility(20, 2, 3.18, 1.0, "even")
    assert not f2.ok
    assert f2.lhs == pytest.approx(38.4496, abs=1e-4)
    assert f2.rhs == pytest.approx(6 * math.sqrt(211))
    assert feasibility(7, 3, 1e6, 1.0, "full").ok


def test_feasibility_parity_guard():
    with pytest.raises(ParameterError):
        feasibility(3, 3, 2.0, 2.0, "odd")
    with pytest.raises(ParameterError):
        feasibility(3, 3, 2.0, 1.0, "even")


def test_feasibility_huge_dimension_uses_logs():
    # binom(200 + 40, 40) is far beyond 2**63
    f = feasibility(200, 40, 50.0, 1.0, "full")
    assert f.ok
    assert not feasibility(200, 40, 1.05, 1.0, "full").ok


def test_min_k_examples():
    p = min_k(20, 3.18)
    assert (p.k, p.parity, p.lifted_dim, p.vertex_bound) == (3, "odd", 1560, 12480)
    assert min_k(20, 2.0).k == 6
    assert min_k(20, 2.0).lifted_dim == 186166
    # D(1, k) = k//2 + 1: 2 T_2(1.5) = 7 < 6 sqrt 2, 2 T_3(1.5) = 18 >= 6 sqrt 2
    assert min_k(1, 1.5).k == min_k_bruteforce(1, 1.5) == 3


@pytest.mark.parametrize("d, tau, mu", [(2, 1.3, 1.0), (5, 2.2, 1.0), (3, 4.0, 3.0), (4, 1.8, 1.5), (10, 2.5, 1.0)])
def test_min_k_bruteforce(d, tau, mu):
    assert min_k(d, tau, mu).k == min_k_bruteforce(d, tau, mu)


def test_min_k_errors():
    with pytest.raises(ParameterError, match="increase tau"):
        min_k(20, 1.0001)
    with pytest.raises(ParameterError):
        min_k(3, 1.0)


def _brent_tau(d, k, mu, parity):
    degs = range(k + 1) if parity == "full" else range(k % 2, k + 1, 2)
    rhs = 6 * math.sqrt(count_monomials(d, degs))
    lam = brentq(lambda t: 2 * cheb_numpy(k, t) - rhs, 1.0, 1e3, xtol=1e-14)
    return tau_from_lambda(lam, mu)


def test_max_tau_examples():
    t = max_tau(20, 3)
    assert 3.17 <= t <= 3.19
    assert feasibility(20, 3, t + 1e-6, 1.0, "odd").ok
    t34 = max_tau(3, 4)
    assert 1.35 < t34 < 1.4
    assert t34 == pytest.approx(_brent_tau(3, 4, 1.0, "even"), abs=1e-9)


@pytest.mark.parametrize("d, k, mu", [(2, 2, 1.0), (5, 3, 1.0), (3, 3, 3.0), (6, 5, 2.0), (20, 3, 1.0)])
def test_max_tau_brent(d, k, mu):
    parity = ("even" if k % 2 == 0 else "odd") if mu == 1.0 else "full"
    t = max_tau(d, k, mu)
    assert t == pytest.approx(_brent_tau(d, k, mu, parity), abs=1e-9)
    assert feasibility(d, k, t + 1e-6, mu, parity).ok


@pytest.mark.parametrize("d, tau, mu", [(3, 1.5, 1.0), (20, 3.18, 1.0), (4, 2.0, 2.0), (8, 1.2, 1.0)])
def test_min_k_max_tau_duality(d, tau, mu):
    p = min_k(d, tau, mu)
    assert max_tau(d, p.k, mu) <= tau + 1e-6
    if p.k > 1:
        assert max_tau(d, p.k - 1, mu) > tau
