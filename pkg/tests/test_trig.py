import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from genhyp import trig
from genhyp.appendix import appendix_laws, appendix_sine_ratios
from genhyp.errors import DegenerateError, DomainError, InputError, RealizabilityError
from genhyp.trig import GeneralizedTriangle
from genhyp.verify import jacobian_fd_error, well_conditioned

TYPES = list(trig.TRIANGLE_TYPES)


def _angle_strategy(eps):
    if eps == 1:
        return st.floats(0.05, math.pi - 0.05)
    return st.floats(0.05, 4.0)


@st.composite
def triangles(draw, types=tuple(TYPES)):
    ttype = draw(st.sampled_from(types))
    angles = [draw(_angle_strategy(e)) for e in ttype]
    try:
        tri = GeneralizedTriangle.from_angles(ttype, angles)
    except DomainError:
        assume(False)
    assume(well_conditioned(tri))
    return tri


# rho and tau ---------------------------------------------------------------------

def test_rho_values():
    assert trig.rho(0, 2.0) == 2.0
    assert trig.rho(1, math.pi / 2) == pytest.approx(1.0, abs=1e-15)
    assert trig.rho(-1, math.log(3)) == pytest.approx(4 / 3, rel=1e-14)
    assert trig.rho_prime(1, 0.3) == pytest.approx(math.cos(0.3))
    assert trig.rho_prime(0, 7.0) == 1.0
    assert trig.rho_prime(-1, 0.3) == pytest.approx(math.cosh(0.3))


def test_tau_values():
    assert trig.tau(1, 0.0) == 0.0
    assert trig.tau(-1, 0.0) == 1.0
    assert trig.tau(0, math.log(2)) == pytest.approx(1.0, rel=1e-15)
    assert trig.tau_prime(1, 0.7) == pytest.approx(math.cosh(0.7))
    assert trig.tau_prime(-1, 0.7) == pytest.approx(math.sinh(0.7))


def test_bad_vertex_type():
    with pytest.raises(InputError):
        trig.rho(2, 1.0)
    with pytest.raises(InputError):
        trig.check_type((1, 1))
    with pytest.raises(InputError):
        trig.check_eps(True)


@given(st.sampled_from([-1, 0, 1]), st.floats(-5, 5))
def test_pair_identities(s, x):
    assert abs(trig.tau_prime(s, x) ** 2 - trig.tau(s, x) ** 2 - s) <= 1e-12 * max(1.0, math.cosh(x) ** 2)
    assert abs(trig.rho_prime(s, x) ** 2 + s * trig.rho(s, x) ** 2 - 1.0) <= 1e-12 * max(1.0, math.cosh(x) ** 2)


# cosine laws ---------------------------------------------------------------------

def test_ideal_triangle_examples():
    assert np.allclose(trig.law_length_from_angles((0, 0, 0), [2, 2, 2]), 0.0, atol=1e-15)
    assert np.allclose(trig.law_angles_from_lengths((0, 0, 0), [0, 0, 0]), 2.0)


def test_equilateral_compact():
    # cosh l = cos t / (1 - cos t) for an equilateral compact triangle
    t = math.pi / 5
    expect = math.acosh(math.cos(t) / (1 - math.cos(t)))
    assert expect == pytest.approx(math.acosh(2 + math.sqrt(5)), rel=1e-14)
    l = trig.law_length_from_angles((1, 1, 1), [t, t, t])
    assert np.allclose(l, expect, rtol=1e-13)
    assert np.allclose(trig.law_angles_from_lengths((1, 1, 1), l), t, rtol=1e-12)


def test_equilateral_hyperideal():
    t = math.acosh(2.0)
    l = trig.law_length_from_angles((-1, -1, -1), [t, t, t])
    assert np.allclose(l, t, rtol=1e-13)
    assert np.allclose(trig.law_angles_from_lengths((-1, -1, -1), l), t, rtol=1e-12)


def test_length_law_domain_error():
    # angle sum above pi: no compact triangle
    with pytest.raises(DomainError):
        trig.law_length_from_angles((1, 1, 1), [2.0, 2.0, 2.0])


def test_angle_law_domain_error():
    with pytest.raises(DomainError):
        trig.law_angles_from_lengths((1, 1, 1), [1.0, 1.0, 5.0])


@settings(max_examples=300, deadline=None)
@given(triangles())
def test_round_trip(tri):
    back = trig.law_angles_from_lengths(tri.ttype, tri.l)
    assert np.allclose(back, tri.theta, rtol=1e-10, atol=1e-10)


@settings(max_examples=300, deadline=None)
@given(triangles())
def test_sine_law(tri):
    r = trig.sine_ratios(tri)
    assert (r.max() - r.min()) / np.abs(r).max() <= 1e-12


@settings(max_examples=300, deadline=None)
@given(triangles())
def test_appendix_agrees(tri):
    a = appendix_laws(tri.ttype, angles=tri.theta)
    b = appendix_laws(tri.ttype, lengths=tri.l)
    assert np.allclose(a.lengths, tri.lengths, rtol=1e-10, atol=1e-10)
    assert np.allclose(b.angles, tri.angles, rtol=1e-10, atol=1e-10)
    r = appendix_sine_ratios(tri)
    assert (r.max() - r.min()) / np.abs(r).max() <= 1e-10


def test_appendix_permuted_type():
    # a type given in non-table order is routed through the permutation
    tri = GeneralizedTriangle.from_angles((0, 1, -1), [0.7, 1.0, 0.6])
    other = appendix_laws((0, 1, -1), angles=tri.theta)
    assert np.allclose(other.lengths, tri.lengths, rtol=1e-11)


def test_appendix_mixed_hyperideal_box():
    # cosh l3 = theta3^2 e^(l1 + l2) / 8 - cosh(l1 - l2) for two hyperideal vertices and one ideal
    l1 = l2 = 1.0
    l3 = 1.4
    theta3 = math.sqrt(8 * (math.cosh(l3) + math.cosh(l1 - l2)) / math.exp(l1 + l2))
    tri = GeneralizedTriangle.from_lengths((-1, -1, 0), [l1, l2, l3])
    assert tri.angles[2] == pytest.approx(theta3, rel=1e-10)
    assert appendix_laws((-1, -1, 0), lengths=[l1, l2, l3]).angles[2] == pytest.approx(theta3, rel=1e-10)


# SAS -----------------------------------------------------------------------------

def test_sas_compact():
    third, tri = trig.law_sas((1, 1, 1), 1.0, 1.0, math.pi / 2)
    assert third == pytest.approx(math.acosh(math.cosh(1) ** 2), rel=1e-14)
    assert third == pytest.approx(1.513374, abs=1e-6)
    assert tri.angles[0] == pytest.approx(tri.angles[1], rel=1e-13)


def test_sas_straight_angle():
    third, _ = trig.law_sas((1, 1, 1), 1.0, 1.0, math.pi)
    assert third == pytest.approx(2.0, rel=1e-14)


def test_sas_two_hyperideal():
    third, _ = trig.law_sas((-1, -1, 1), 1.0, 1.0, math.pi / 2)
    assert third == pytest.approx(math.acosh(math.sinh(1) ** 2), rel=1e-13)
    assert third == pytest.approx(0.847451, abs=1e-6)


def test_sas_unrealizable():
    with pytest.raises(RealizabilityError):
        trig.law_sas((-1, -1, 0), 0.0, 0.0, 1.0)
    with pytest.raises(RealizabilityError):
        trig.law_sas((-1, -1, -1), 0.1, 0.1, 0.1)


@settings(max_examples=300, deadline=None)
@given(
    st.sampled_from([-1, 0, 1]),
    st.floats(0.2, 3.0),
    st.floats(0.2, 3.0),
    st.floats(0.05, 3.0),
)
def test_factored_sas_matches_cosine_law(delta, l1, l2, theta):
    # the factored hyperideal form against the plain cosine-law evaluation
    if delta == 1:
        theta = min(theta, math.pi - 0.05)
    a, b = trig.sas_gap_terms(delta, l1, l2)
    assume(theta - a - b > 1e-3)
    third = trig.sas_third_side((-1, -1, delta), l1, l2, theta)
    s = -delta
    direct = 2 * trig.rho(delta, theta / 2) ** 2 * trig.tau(s, l1) * trig.tau(s, l2) - math.cosh(l1 - l2)
    assert math.cosh(third) == pytest.approx(direct, rel=1e-9)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([(1, 1, 1), (1, 1, -1), (1, 1, 0), (0, 0, 1), (0, 0, -1), (0, 0, 0)]),
       st.floats(0.2, 2.5), st.floats(0.2, 2.5), st.floats(0.1, 3.0))
def test_sas_triangle_is_consistent(ttype, l1, l2, theta):
    if ttype[2] == 1:
        theta = min(theta, math.pi - 0.05)
    third, tri = trig.law_sas(ttype, l1, l2, theta)
    assert tri.angles[2] == pytest.approx(theta, rel=1e-9)
    assert tri.lengths[0] == l1 and tri.lengths[1] == l2 and tri.lengths[2] == third


# Gram matrices and derivatives -----------------------------------------------------

def test_ideal_gram_determinant():
    tri = GeneralizedTriangle((0, 0, 0), (2.0, 2.0, 2.0), (0.0, 0.0, 0.0))
    gl = trig.gram_lengths((0, 0, 0), tri.lengths)
    assert trig.det3(gl) == pytest.approx(np.linalg.det(gl), abs=1e-15)
    assert trig.det3(gl) == pytest.approx(-0.25, abs=1e-15)
    assert trig.det_identity_rhs(tri, 0)[0] == pytest.approx(-0.25, abs=1e-15)


def test_equilateral_m_product():
    t = math.pi / 5
    tri = GeneralizedTriangle.from_angles((1, 1, 1), [t, t, t])
    m = trig.m_matrix(tri)
    prod = m @ trig.gram_lengths(tri.ttype, tri.l) @ m @ trig.gram_angles(tri.ttype, tri.theta)
    assert np.max(np.abs(prod - np.eye(3))) <= 1e-12


def test_ideal_length_derivatives():
    tri = GeneralizedTriangle.from_angles((0, 0, 0), [2.0, 2.0, 2.0])
    j = trig.jacobian_dl_dtheta(tri)
    assert j[0, 0] == pytest.approx(0.0, abs=1e-14)
    assert j[0, 1] == pytest.approx(-0.5, rel=1e-13)


def test_hyperideal_jacobian_fd():
    tri = GeneralizedTriangle.from_angles((-1, -1, -1), [1.0, 1.2, 1.4])
    assert jacobian_fd_error(tri) <= 1e-5


def test_degenerate_raises():
    tri = GeneralizedTriangle((1, 1, 1), (0.0, 0.0, math.pi), (1.0, 0.5, 0.5))
    with pytest.raises(DegenerateError):
        trig.m_matrix(tri)


@settings(max_examples=300, deadline=None)
@given(triangles())
def test_gram_identities(tri):
    gl = trig.det3(trig.gram_lengths(tri.ttype, tri.l))
    ga = trig.det3(trig.gram_angles(tri.ttype, tri.theta))
    assert gl < 0 and ga < 0
    for i in range(3):
        rl, ra = trig.det_identity_rhs(tri, i)
        assert abs(gl - rl) <= 1e-9
        assert abs(ga - ra) <= 1e-9
    m = trig.m_matrix(tri)
    prod = m @ trig.gram_lengths(tri.ttype, tri.l) @ m @ trig.gram_angles(tri.ttype, tri.theta)
    assert np.max(np.abs(prod - np.eye(3))) <= 1e-10


@settings(max_examples=100, deadline=None)
@given(triangles())
def test_jacobians_by_differences(tri):
    assert jacobian_fd_error(tri) <= 1e-5
    prod = trig.jacobian_dl_dtheta(tri) @ trig.jacobian_dtheta_dl(tri)
    assert np.max(np.abs(prod - np.eye(3))) <= 1e-10
