import math
import warnings

import numpy as np
import pytest
from sklearn.base import clone

from helpers import hand_mesh, random_polygons
from oracles import J01_SQUARED, rectangle_lambda2
from plapbounds.bounds import hersch_protter_lower
from plapbounds.eigensolver import (
    DiscreteField,
    PLaplacianEigensolver,
    SolverConfig,
    gradient_check,
    minimize_lambda_p,
    minimize_lambda_pq,
    minimize_mixed,
    rayleigh_pq,
)
from plapbounds.exceptions import InadmissibleExponent, Unsupported, ZeroDenominator
from plapbounds.geometry import ConvexPolygon, inradius
from plapbounds.mesh import refine, triangulate


def hat(mesh):
    u = np.zeros(mesh.n_nodes)
    u[4] = 1.0
    return u


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
def test_hand_hat_quotient(p):
    mesh = hand_mesh()
    num = (4 * 2.0**p + 2 * (2 * math.sqrt(2)) ** p) / 8
    den = 6 / 8 * 3.0**-p
    assert rayleigh_pq(mesh, hat(mesh), p) == pytest.approx(num / den, rel=1e-13)


def test_hand_hat_p2_is_48():
    mesh = hand_mesh()
    assert rayleigh_pq(mesh, hat(mesh), 2.0) == pytest.approx(48.0, rel=1e-14)
    # one free node, so the discrete minimum is the hat itself
    assert minimize_lambda_p(None, 2.0, mesh=mesh).value == pytest.approx(48.0, rel=1e-12)
    assert minimize_lambda_p(None, 3.0, mesh=mesh).value == pytest.approx(
        rayleigh_pq(mesh, hat(mesh), 3.0), rel=1e-10
    )


@pytest.mark.parametrize("p,q", [(2.0, 1.0), (2.0, 3.5), (3.0, 1.5)])
def test_hand_hat_pq(p, q):
    mesh = hand_mesh()
    num = (4 * 2.0**p + 2 * (2 * math.sqrt(2)) ** p) / 8
    den = 6 / 8 * 3.0**-q
    assert rayleigh_pq(mesh, hat(mesh), p, q) == pytest.approx(num / den ** (p / q), rel=1e-13)


def test_zero_field_raises():
    mesh = hand_mesh()
    with pytest.raises(ZeroDenominator):
        rayleigh_pq(mesh, np.zeros(9), 2.0)


def test_unit_square_p2():
    res = minimize_lambda_p(ConvexPolygon.unit_square(), 2.0, h=1 / 64)
    assert res.value == pytest.approx(2 * math.pi**2, rel=0.02)
    assert res.value >= 2 * math.pi**2 * (1 - 1e-12)
    assert res.converged


def test_box_8x1_p2():
    res = minimize_lambda_p(ConvexPolygon.rectangle(8.0, 1.0), 2.0, h=1 / 64)
    assert res.value == pytest.approx(rectangle_lambda2(8.0, 1.0), rel=0.02)


def test_disk_p2():
    res = minimize_lambda_p(ConvexPolygon.regular(256), 2.0, h=1 / 64)
    assert res.value == pytest.approx(J01_SQUARED, rel=0.02)


@pytest.mark.parametrize("p", [1.5, 3.0])
def test_q_equal_p_consistent(p, square):
    mesh = triangulate(square, 1 / 16)
    a = minimize_lambda_p(None, p, mesh=mesh)
    b = minimize_lambda_pq(None, p, p, mesh=mesh)
    assert a.value == pytest.approx(b.value, rel=1e-10)


def test_subhomogeneous_boxes_decrease():
    values = [minimize_lambda_pq(ConvexPolygon.rectangle(L, 1.0), 2.0, 1.0, h=1 / 16).value for L in (1, 2, 4, 8)]
    assert all(b < a for a, b in zip(values, values[1:]))


def test_mixed_square_one_edge():
    res = minimize_mixed(ConvexPolygon.unit_square(), [0], 2.0, h=1 / 32)
    assert res.value == pytest.approx((math.pi / 2) ** 2, rel=0.02)
    assert res.value >= (math.pi / 2) ** 2 * (1 - 1e-12)


def test_mixed_all_edges_equals_dirichlet(pentagon):
    mesh = triangulate(pentagon, 0.2)
    full = minimize_lambda_p(None, 2.0, mesh=mesh).value
    mixed = minimize_mixed(pentagon, range(5), 2.0, mesh=mesh).value
    assert mixed == pytest.approx(full, rel=1e-12)


def test_mixed_fewer_edges_lower(pentagon):
    mesh = triangulate(pentagon, 0.2)
    assert minimize_mixed(pentagon, [0, 1], 2.0, mesh=mesh).value < minimize_lambda_p(None, 2.0, mesh=mesh).value


def test_pyramid_piece_mixed():
    # piece of the unit square over its bottom edge, apex at the centre (height 1/2)
    piece = ConvexPolygon([(0, 0), (1, 0), (0.5, 0.5)])
    res = minimize_mixed(piece, [0], 2.0, h=1 / 32)
    assert res.value >= 0.98 * math.pi**2


@pytest.mark.parametrize("p", [1.5, 3.0])
def test_pyramid_piece_mixed_general_p(p):
    piece = ConvexPolygon([(0, 0), (1, 0), (0.5, 0.5)])
    res = minimize_mixed(piece, [0], p, h=1 / 24)
    assert res.value >= 0.98 * hersch_protter_lower(p, 0.5, source="reference").value


def test_scale_invariance(pentagon):
    mesh = triangulate(pentagon, 0.25)
    rng = np.random.default_rng(0)
    u = np.abs(rng.normal(size=mesh.n_nodes))
    f = DiscreteField(mesh, u)
    for p, q in [(2.0, 2.0), (3.0, 1.5), (1.4, 2.5)]:
        assert rayleigh_pq(mesh, 2 * f.values, p, q) == pytest.approx(rayleigh_pq(mesh, f, p, q), rel=1e-12)
        assert rayleigh_pq(mesh, -f.values, p, q) == pytest.approx(rayleigh_pq(mesh, f, p, q), rel=1e-12)


@pytest.fixture(scope="module")
def square_mesh():
    return triangulate(ConvexPolygon.unit_square(), 1 / 8)


def test_gradient_check_p2(square_mesh):
    # away from the minimizer, where the gradient is not tiny
    u = DiscreteField(square_mesh, np.abs(np.random.default_rng(0).normal(size=square_mesh.n_nodes)))
    assert gradient_check(square_mesh, u, 2.0, delta=1e-6) < 1e-6


def test_gradient_check_p3(square_mesh):
    rng = np.random.default_rng(1)
    u = DiscreteField(square_mesh, np.abs(rng.normal(size=square_mesh.n_nodes)))
    assert gradient_check(square_mesh, u, 3.0, delta=1e-6, eps=1e-4) < 1e-4


def test_gradient_check_p13(square_mesh):
    rng = np.random.default_rng(2)
    u = DiscreteField(square_mesh, np.abs(rng.normal(size=square_mesh.n_nodes)))
    assert gradient_check(square_mesh, u, 1.3, delta=1e-6, eps=1e-3) < 1e-3


def test_gradient_check_delta_range(square_mesh):
    with pytest.raises(ValueError):
        gradient_check(square_mesh, np.ones(square_mesh.n_nodes), 2.0, delta=1e-2)


@pytest.mark.parametrize("p", [1.5, 2.0, 4.0])
def test_random_fields_above_lower_bound(p):
    rng = np.random.default_rng(int(10 * p))
    count = 0
    for poly in random_polygons(10, seed=int(10 * p)):
        mesh = triangulate(poly, min(poly.diameter / 12, 0.9 * poly.edge_lengths.min()))
        lower = hersch_protter_lower(p, inradius(poly), source="reference").value
        for _ in range(10):
            f = DiscreteField(mesh, rng.normal(size=mesh.n_nodes))
            assert rayleigh_pq(mesh, f, p) >= lower
            count += 1
    assert count == 100


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
def test_refinement_monotone(p, pentagon):
    mesh = triangulate(pentagon, 0.28)
    coarse = minimize_lambda_p(None, p, mesh=mesh).value
    fine = minimize_lambda_p(None, p, mesh=refine(mesh)).value
    assert fine <= coarse * (1 + 1e-10)


def test_domain_monotone():
    # unit square inside the 2x1 rectangle; same structured spacing
    small = minimize_lambda_p(ConvexPolygon.unit_square(), 3.0, h=1 / 16).value
    big = minimize_lambda_p(ConvexPolygon.rectangle(2.0, 1.0), 3.0, h=1 / 16).value
    assert big <= small


@pytest.mark.parametrize("p", [1.5, 3.0])
@pytest.mark.parametrize("t", [0.5, 2.0])
def test_scaling_law(p, t, pentagon):
    base = minimize_lambda_p(pentagon, p, h=0.1).value
    scaled = minimize_lambda_p(pentagon.scaled(t), p, h=0.1 * t).value
    assert scaled == pytest.approx(t**-p * base, rel=0.01)


@pytest.mark.parametrize("p,q", [(1.5, 1.5), (2.0, 2.0), (4.0, 4.0), (2.0, 1.0), (2.0, 4.0)])
def test_minimizer_single_sign(p, q, pentagon):
    res = minimize_lambda_pq(pentagon, p, q, h=0.2)
    u = res.field.values
    assert u.min() >= -1e-8 * u.max()
    assert res.converged
    # the linear case is solved exactly and skips the restarts
    assert len(res.restart_values) == (1 if p == q == 2.0 else 4)


def test_exponent_validation(square):
    with pytest.raises(InadmissibleExponent):
        minimize_lambda_p(square, 1.0)
    with pytest.raises(InadmissibleExponent):
        minimize_lambda_pq(square, 2.0, 0.5)
    with pytest.raises(InadmissibleExponent):
        minimize_lambda_pq(square, 2.0, math.inf)
    # admissible for p > N but not handled by the discrete solver
    with pytest.raises(Unsupported):
        minimize_lambda_pq(square, 3.0, math.inf)
    with pytest.raises(ValueError):
        SolverConfig(p=2.0, tol=0.0)
    with pytest.raises(ValueError):
        minimize_mixed(square, [], 2.0)
    with pytest.raises(ValueError):
        minimize_mixed(square, [7], 2.0)


def test_estimator_api(square):
    est = PLaplacianEigensolver(p=2.0, h=1 / 16)
    assert est.get_params()["h"] == 1 / 16
    other = clone(est).set_params(p=3.0)
    assert other.p == 3.0 and est.p == 2.0
    est.fit(square)
    assert est.eigenvalue_ == pytest.approx(2 * math.pi**2, rel=0.03)
    assert est.score() == -est.eigenvalue_
    centre, corner = est.predict([[0.5, 0.5], [0.0, 0.0]])
    assert centre > 0 and corner == pytest.approx(0.0, abs=1e-14)


def test_estimator_mixed(square):
    est = PLaplacianEigensolver(p=2.0, h=1 / 16, dirichlet_edges=[0]).fit(square)
    assert est.eigenvalue_ == pytest.approx((math.pi / 2) ** 2, rel=0.03)


def test_restart_disagreement_flags(pentagon):
    # an absurdly tight restart tolerance must mark the result unconverged
    cfg = SolverConfig(p=3.0, restart_rtol=1e-300, max_iter=3, n_restarts=1)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        res = minimize_lambda_p(pentagon, 3.0, cfg, h=0.25)
    assert not res.converged
