import math

import numpy as np
import pytest

from thrifty.errors import ContractViolation
from thrifty.lift import LiftedSpace, parity_for
from thrifty.selection import direction_ratios, select_subset


def lifted_cloud(seed, d=3, k=3, n=200):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((n, d))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    return LiftedSpace(d, k, parity_for(k)).lift_points(x)


def test_cross_polytope_keeps_all():
    pts = np.vstack([np.eye(4), -np.eye(4)])
    c = select_subset(pts)
    assert sorted(c.chosen_indices.tolist()) == list(range(8))
    assert c.span_rank == 4
    assert c.dilution_factor == pytest.approx(3 * 2)


def test_rank_deficient_input_projects():
    rng = np.random.default_rng(0)
    basis = np.linalg.qr(rng.standard_normal((6, 2)))[0]
    pts = rng.standard_normal((50, 2)) @ basis.T
    c = select_subset(pts)
    assert c.span_rank == 2
    assert len(c.chosen_indices) <= 8
    assert direction_ratios(pts, c.chosen_indices).max() <= 3 * math.sqrt(2) * (1 + 1e-6)


def test_rejects_empty_and_zero():
    with pytest.raises(ContractViolation):
        select_subset(np.zeros((0, 3)))
    with pytest.raises(ContractViolation):
        select_subset(np.zeros((4, 3)))


@pytest.mark.parametrize("seed", range(4))
def test_direction_ratio_bound(seed):
    pts = lifted_cloud(seed)
    c = select_subset(pts)
    r = c.span_rank
    assert len(c.chosen_indices) <= 4 * r
    assert len(set(c.chosen_indices.tolist())) == len(c.chosen_indices)
    ratios = direction_ratios(pts, c.chosen_indices, 2000, seed)
    assert np.all(ratios >= 1 - 1e-12)
    assert ratios.max() <= 3 * math.sqrt(r) * (1 + 1e-6)


@pytest.mark.parametrize("seed", range(3))
def test_weight_trace_bounds(seed):
    pts = lifted_cloud(10 + seed, d=2, k=4, n=150)
    c = select_subset(pts)
    r = c.span_rank
    assert c.john_residual <= 1e-6
    total = c.combined_weights.sum()
    assert r - 1e-6 <= total <= 9 * r + 1e-6
    assert c.bss_ratio <= 9 + 1e-6


def test_permutation_invariance():
    pts = lifted_cloud(7, n=120)
    perm = np.random.default_rng(1).permutation(len(pts))
    a = select_subset(pts)
    b = select_subset(pts[perm])
    ra = direction_ratios(pts, a.chosen_indices).max()
    rb = direction_ratios(pts, perm[b.chosen_indices]).max()
    bound = 3 * math.sqrt(a.span_rank) * (1 + 1e-6)
    assert ra <= bound and rb <= bound
    assert a.span_rank == b.span_rank
