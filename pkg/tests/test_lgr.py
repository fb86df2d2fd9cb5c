import math

import numpy as np
import pytest

from bangopt.lgr import (
    MeshLayout,
    affine_to_time,
    barycentric_interpolate,
    diff_matrix,
    interpolate,
    lgr_rule,
    time_to_tau,
)


def test_single_point_rule():
    r = lgr_rule(1)
    assert r.nodes.tolist() == [-1.0]
    assert r.weights.tolist() == [2.0]


def test_two_point_rule_analytic():
    # roots of P1 + P2 = tau + (3 tau^2 - 1)/2: tau = -1 and tau = 1/3
    r = lgr_rule(2)
    assert abs(r.nodes[0] + 1.0) < 1e-15
    assert abs(r.nodes[1] - 1.0 / 3.0) < 1e-14
    assert abs(r.weights[0] - 0.5) < 1e-14
    assert abs(r.weights[1] - 1.5) < 1e-14


def test_five_point_rule_integrates_tau8():
    r = lgr_rule(5)
    assert abs(r.weights.sum() - 2.0) < 1e-13
    assert abs((r.weights * r.nodes**8).sum() - 2.0 / 9.0) < 1e-12


@pytest.mark.parametrize("n", range(1, 11))
def test_rule_invariants(n):
    r = lgr_rule(n)
    assert r.nodes[0] == -1.0
    assert np.all(np.diff(r.nodes) > 0)
    assert np.all(r.nodes < 1.0)
    assert np.all(r.weights > 0)
    assert abs(r.weights.sum() - 2.0) < 1e-13
    assert r.support_node == 1.0


@pytest.mark.parametrize("n", range(1, 11))
def test_quadrature_exactness_degree_2n_minus_2(n):
    # random polynomial coefficients, exact monomial integrals as oracle
    rng = np.random.default_rng(1234 + n)
    r = lgr_rule(n)
    for _ in range(5):
        coef = rng.uniform(-1, 1, size=2 * n - 1)  # degrees 0 .. 2n-2
        vals = np.polynomial.polynomial.polyval(r.nodes, coef)
        exact = sum(c * (1.0 - (-1.0) ** (p + 1)) / (p + 1) for p, c in enumerate(coef))
        assert abs((r.weights * vals).sum() - exact) < 1e-12


def test_rules_share_only_left_endpoint():
    for n in range(1, 8):
        for m in range(n + 1, 9):
            a, b = lgr_rule(n).nodes[1:], lgr_rule(m).nodes[1:]
            if a.size and b.size:
                assert np.min(np.abs(a[:, None] - b[None, :])) > 1e-8


def test_rule_cache_returns_same_object():
    assert lgr_rule(4) is lgr_rule(4)


@pytest.mark.parametrize("n", [0, -3, 65])
def test_rule_rejects_out_of_range(n):
    with pytest.raises(ValueError):
        lgr_rule(n)


def test_diff_matrix_single_point_hand_derived():
    # support {-1, +1}: d/dtau of (1 - tau)/2 and (1 + tau)/2
    d = diff_matrix(lgr_rule(1))
    assert np.allclose(d.entries, [[-0.5, 0.5]], atol=1e-15)


@pytest.mark.parametrize("n", range(1, 11))
def test_diff_matrix_rows_sum_to_zero(n):
    d = diff_matrix(lgr_rule(n))
    assert np.max(np.abs(d.entries.sum(axis=1))) < 1e-12


def test_diff_matrix_cubic():
    r = lgr_rule(5)
    d = diff_matrix(r)
    got = d.entries @ r.support_points**3
    assert np.max(np.abs(got - 3.0 * r.nodes**2)) < 1e-10


@pytest.mark.parametrize("n", range(1, 11))
def test_diff_matrix_exact_up_to_degree_n(n):
    r = lgr_rule(n)
    d = diff_matrix(r)
    for p in range(n + 1):
        got = d.entries @ r.support_points**p
        want = 0.0 * r.nodes if p == 0 else p * r.nodes ** (p - 1)
        assert np.max(np.abs(got - want)) < 1e-10


def test_diff_matrix_shape_and_last_column():
    r = lgr_rule(4)
    d = diff_matrix(r)
    assert d.entries.shape == (4, 5)
    assert np.allclose(d.last_column, d.entries[:, -1])


def test_interpolate_constant():
    r = lgr_rule(4)
    assert abs(interpolate(np.full(5, 3.7), r, 0.123) - 3.7) < 1e-14


def test_interpolate_reproduces_quadratic():
    r = lgr_rule(3)
    vals = r.support_points**2
    assert abs(interpolate(vals, r, 0.5) - 0.25) < 1e-13


def test_interpolate_exp():
    # the degree-8 remainder at 0.2 is bounded by e/9! * |omega(0.2)|,
    # which is ~4e-8; nine collocation points reach 1e-9
    r = lgr_rule(8)
    omega = np.prod(0.2 - r.support_points)
    bound = np.e / math.factorial(9) * abs(omega)
    err = interpolate(np.exp(r.support_points), r, 0.2) - np.exp(0.2)
    assert abs(err) < bound
    r9 = lgr_rule(9)
    err9 = interpolate(np.exp(r9.support_points), r9, 0.2) - np.exp(0.2)
    assert abs(err9) < 1e-9


def test_interpolate_exact_at_nodes():
    r = lgr_rule(6)
    vals = np.sin(r.support_points)
    for k, p in enumerate(r.support_points):
        assert interpolate(vals, r, p) == vals[k]


def test_barycentric_interpolate_matrix_values():
    pts = np.array([-1.0, 0.0, 1.0])
    from bangopt.lgr import barycentric_weights

    w = barycentric_weights(pts)
    vals = np.stack([pts, pts**2], axis=1)
    out = barycentric_interpolate(pts, w, vals, 0.5)
    assert np.allclose(out, [0.5, 0.25], atol=1e-14)


def test_affine_map_endpoints_and_midpoint():
    assert affine_to_time(-1.0, 0.0, 7.0) == 0.0
    assert affine_to_time(0.0, 2.0, 4.0) == 3.0
    assert affine_to_time(1.0, 0.0, 7.0) == 7.0


def test_affine_round_trip():
    t = affine_to_time(0.37, 1.5, 9.25)
    assert abs(time_to_tau(t, 1.5, 9.25) - 0.37) < 1e-14


def test_affine_rejects_bad_span():
    with pytest.raises(ValueError):
        affine_to_time(0.0, 2.0, 2.0)
    with pytest.raises(ValueError):
        time_to_tau(0.0, 3.0, 1.0)


def test_mesh_layout_validation():
    m = MeshLayout.uniform(10, 5)
    assert m.n_intervals == 10
    assert m.n_collocation == 50
    assert m.boundaries[0] == -1.0 and m.boundaries[-1] == 1.0
    with pytest.raises(ValueError):
        MeshLayout(np.array([-1.0, 0.5, 0.2, 1.0]), (3, 3, 3))
    with pytest.raises(ValueError):
        MeshLayout(np.array([-1.0, 1.0]), (2,))
    with pytest.raises(ValueError):
        MeshLayout(np.array([-1.0, 1.0]), (11,))
    with pytest.raises(ValueError):
        MeshLayout(np.array([-0.9, 1.0]), (5,))
