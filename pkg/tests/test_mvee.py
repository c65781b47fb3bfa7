import numpy as np
import pytest

from thrifty.errors import ContractViolation
from thrifty.mvee import centered_mvee, john_decomposition


def _check_john(j, d):
    z, a = j.contact_points, j.weights
    assert np.linalg.norm((z * a[:, None]).T @ z - np.eye(d)) <= 1e-6
    assert abs(a.sum() - d) <= 1e-6
    np.testing.assert_allclose(np.linalg.norm(z, axis=1), 1.0, atol=1e-6)
    assert np.all(a > 0)


@pytest.mark.parametrize("d", [1, 2, 3, 6])
def test_cross_polytope_is_its_own_contact_set(d):
    pts = np.vstack([np.eye(d), -np.eye(d)])
    j = john_decomposition(pts)
    np.testing.assert_allclose(j.ellipsoid.m, np.eye(d), atol=1e-9)
    assert len(j.indices) == 2 * d
    np.testing.assert_allclose(j.weights, 0.5, atol=1e-9)
    _check_john(j, d)


def test_square():
    sq = np.array([[1, 1], [1, -1], [-1, 1], [-1, -1]], float)
    j = john_decomposition(sq)
    np.testing.assert_allclose(j.ellipsoid.m, np.eye(2) / 2, atol=1e-9)
    np.testing.assert_allclose(np.abs(j.contact_points), 1 / np.sqrt(2), atol=1e-9)
    np.testing.assert_allclose(j.weights, 0.5, atol=1e-9)


def test_axis_aligned():
    r = centered_mvee([[2, 0], [-2, 0], [0, 1], [0, -1]])
    np.testing.assert_allclose(r.ellipsoid.m, np.diag([0.25, 1.0]), atol=1e-9)


def test_interior_points_get_no_weight():
    pts = np.array([[2, 0], [-2, 0], [0, 1], [0, -1], [0.5, 0.2], [-0.1, 0.3]], float)
    j = john_decomposition(pts)
    assert set(j.indices.tolist()) == {0, 1, 2, 3}


def test_rank_deficient_rejected():
    with pytest.raises(ContractViolation):
        centered_mvee([[1, 0, 0], [0, 1, 0], [1, 1, 0]])


def test_duplicates_merge():
    pts = np.array([[1, 0], [1, 0], [0, 1], [-1, 0], [0, -1]], float)
    j = john_decomposition(pts)
    _check_john(j, 2)
    w = dict(zip(j.indices.tolist(), j.weights))
    assert w[0] + w[1] + w[3] == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("seed", range(8))
def test_random_decompositions(seed):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(2, 9))
    n = int(rng.integers(d + 1, 400))
    pts = rng.standard_normal((n, d)) * rng.uniform(0.2, 3.0, d)
    j = john_decomposition(pts)
    _check_john(j, d)
    ell = j.ellipsoid
    q = np.einsum("ij,jk,ik->i", pts, ell.m, pts)
    assert q.max() <= 1 + 1e-8
    assert q.max() >= 1 - 1e-8
    np.testing.assert_allclose(ell.sqrt_m @ ell.sqrt_m, ell.m, atol=1e-9 * np.abs(ell.m).max())
    np.testing.assert_allclose(j.contact_points, pts[j.indices] @ ell.sqrt_m, atol=1e-12)
    ys = rng.standard_normal((100, d))
    lhs = ((ys @ j.contact_points.T) ** 2 * j.weights).sum(axis=1)
    np.testing.assert_allclose(lhs, (ys ** 2).sum(axis=1), rtol=1e-5)


@pytest.mark.parametrize("seed", range(5))
def test_linear_invariance(seed):
    rng = np.random.default_rng(100 + seed)
    d = int(rng.integers(2, 7))
    pts = rng.standard_normal((60, d))
    a = rng.standard_normal((d, d)) + 3 * np.eye(d)
    m = centered_mvee(pts).ellipsoid.m
    m_a = centered_mvee(pts @ a.T).ellipsoid.m
    ainv = np.linalg.inv(a)
    np.testing.assert_allclose(m_a, ainv.T @ m @ ainv, rtol=1e-6, atol=1e-7 * np.abs(m_a).max())


@pytest.mark.parametrize("seed", range(4))
def test_matches_convex_solver(seed):
    cp = pytest.importorskip("cvxpy")
    rng = np.random.default_rng(200 + seed)
    d = 3
    pts = rng.standard_normal((25, d))
    m = cp.Variable((d, d), PSD=True)
    cons = [cp.quad_form(p, m) <= 1 for p in pts]
    prob = cp.Problem(cp.Maximize(cp.log_det(m)), cons)
    try:
        prob.solve()
    except cp.error.SolverError:
        pytest.skip("no conic solver with log_det support")
    ours = centered_mvee(pts).ellipsoid.m
    np.testing.assert_allclose(ours, m.value, atol=2e-4 * np.abs(ours).max())


def test_degenerate_lifted_support_converges():
    # many boundary points on a cubic variety; first-order steps alone stall near gap 3e-6
    from thrifty.bodies import generate
    from thrifty.lift import LiftedSpace
    from thrifty.numkit import orthonormal_span

    body = generate("ellipsoid_sample", 3, 120, seed=1)
    lifted = LiftedSpace(3, 3, "odd").lift_points(body.points)
    basis, r = orthonormal_span(lifted)
    j = john_decomposition(lifted @ basis)
    _check_john(j, r)
    assert j.gap <= 1e-7 / r
