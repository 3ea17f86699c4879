"""Generalized hyperbolic triangles: the uniform cosine and sine laws.

A triangle has three generalized vertices of type ``eps`` in {-1, 0, 1}
(hyperideal, ideal, finite).  Vertex ``i`` carries the generalized angle
``theta[i]`` and the opposite edge has generalized length ``l[i]``.  All ten
unordered types share one set of formulas written in terms of the two
function families

    rho_eps(theta) = sin(theta), theta, sinh(theta)      (eps = 1, 0, -1)
    tau_s(l)       = e^l / 2 - s e^-l / 2

Indices are 0-based throughout; ``(i, j, k)`` always runs over the cyclic
rotations of ``(0, 1, 2)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from .errors import DegenerateError, DomainError, InputError

EPSILONS = (-1, 0, 1)
DEGENERACY_TOL = 1e-14

_ROT = ((0, 1, 2), (1, 2, 0), (2, 0, 1))

# Appendix tables list these ten representatives.
TRIANGLE_TYPES = (
    (1, 1, 1),
    (1, 1, -1),
    (-1, -1, 1),
    (-1, -1, -1),
    (1, 1, 0),
    (1, -1, 0),
    (-1, -1, 0),
    (0, 0, 1),
    (0, 0, -1),
    (0, 0, 0),
)


def check_eps(eps) -> int:
    if eps not in EPSILONS or isinstance(eps, bool):
        raise InputError(f"vertex type must be -1, 0 or 1, got {eps!r}")
    return int(eps)


def check_type(ttype: Sequence[int]) -> Tuple[int, int, int]:
    if len(ttype) != 3:
        raise InputError(f"triangle type needs three entries, got {ttype!r}")
    return tuple(check_eps(e) for e in ttype)


def rho(eps, theta):
    eps = check_eps(eps)
    if eps == 1:
        return np.sin(theta)
    if eps == -1:
        return np.sinh(theta)
    return theta * 1.0


def rho_prime(eps, theta):
    eps = check_eps(eps)
    if eps == 1:
        return np.cos(theta)
    if eps == -1:
        return np.cosh(theta)
    return np.ones_like(theta, dtype=float) if np.ndim(theta) else 1.0


def tau(s, l):
    s = check_eps(s)
    if s == 1:
        return np.sinh(l)
    if s == -1:
        return np.cosh(l)
    return 0.5 * np.exp(l)


def tau_prime(s, l):
    s = check_eps(s)
    if s == 1:
        return np.cosh(l)
    if s == -1:
        return np.sinh(l)
    return 0.5 * np.exp(l)


def tau_prime_inverse(s: int, x: float, what: str = "edge") -> float:
    """Solve ``tau'_s(l) = x`` for ``l`` in the interval J_s.

    J_s is the positive half-line for s = +-1 and the whole line for s = 0.
    """
    if not math.isfinite(x):
        raise DomainError(f"{what}: non-finite value {x!r}")
    if s == 1:
        if x - 1.0 <= DEGENERACY_TOL:
            raise DomainError(f"{what}: cosh l = {x!r} has no positive solution")
        return math.acosh(x)
    if s == 0:
        if x <= 0.0:
            raise DomainError(f"{what}: e^l/2 = {x!r} is not positive")
        return math.log(2.0 * x)
    if x <= DEGENERACY_TOL:
        raise DomainError(f"{what}: sinh l = {x!r} has no positive solution")
    return math.asinh(x)


def half_angle_inverse(eps: int, y: float, what: str = "corner", tol: float = DEGENERACY_TOL) -> float:
    """Solve ``2 rho_eps(theta/2)^2 = y`` on the injective branch."""
    if not math.isfinite(y) or y <= tol:
        raise DomainError(f"{what}: half-angle expression {y!r} is not positive")
    if eps == 1:
        if y >= 2.0 - tol:
            raise DomainError(f"{what}: half-angle expression {y!r} needs an angle >= pi")
        return 2.0 * math.asin(math.sqrt(0.5 * y))
    if eps == 0:
        return math.sqrt(2.0 * y)
    return 2.0 * math.asinh(math.sqrt(0.5 * y))


def check_angles(ttype, angles, allow_pi=False) -> np.ndarray:
    theta = np.asarray(angles, dtype=float)
    if theta.shape != (3,):
        raise InputError("expected three angles")
    for i, (e, t) in enumerate(zip(ttype, theta)):
        if not math.isfinite(t) or t <= 0.0:
            raise InputError(f"angle {i} must be positive, got {t!r}")
        if e == 1 and (t > math.pi or (t == math.pi and not allow_pi)):
            raise InputError(f"angle {i} of a finite vertex must lie in (0, pi), got {t!r}")
    return theta


def check_lengths(ttype, lengths) -> np.ndarray:
    l = np.asarray(lengths, dtype=float)
    if l.shape != (3,):
        raise InputError("expected three lengths")
    for i, j, k in _ROT:
        if not math.isfinite(l[i]):
            raise InputError(f"length {i} is not finite")
        if ttype[j] * ttype[k] != 0 and l[i] <= 0.0:
            raise InputError(f"length {i} joins two non-ideal vertices and must be positive, got {l[i]!r}")
    return l


def law_length_from_angles(ttype, angles) -> np.ndarray:
    """Edge lengths from the three generalized angles."""
    ttype = check_type(ttype)
    theta = check_angles(ttype, angles)
    out = np.empty(3)
    for i, j, k in _ROT:
        ei, ej, ek = ttype[i], ttype[j], ttype[k]
        x = (rho_prime(ei, theta[i]) + rho_prime(ej, theta[j]) * rho_prime(ek, theta[k])) / (
            rho(ej, theta[j]) * rho(ek, theta[k])
        )
        out[i] = tau_prime_inverse(ej * ek, float(x), what=f"edge {i}")
    return out


def half_angle_values(ttype, lengths) -> np.ndarray:
    """Right-hand sides of the half-angle law, one per corner."""
    l = np.asarray(lengths, dtype=float)
    y = np.empty(3)
    for i, j, k in _ROT:
        ei, ej, ek = ttype[i], ttype[j], ttype[k]
        num = tau_prime(ej * ek, l[i]) - 0.5 * ej * math.exp(l[j] - l[k]) - 0.5 * ek * math.exp(l[k] - l[j])
        y[i] = num / (tau(ek * ei, l[j]) * tau(ei * ej, l[k]))
    return y


def law_angles_from_lengths(ttype, lengths, tol: float = DEGENERACY_TOL) -> np.ndarray:
    """Generalized angles from the three edge lengths.

    Half-angle values at or below ``tol`` are rejected as degenerate; callers
    that need genuinely tiny angles pass ``tol=0``.
    """
    ttype = check_type(ttype)
    l = check_lengths(ttype, lengths)
    y = half_angle_values(ttype, l)
    return np.array([half_angle_inverse(ttype[i], y[i], what=f"corner {i}", tol=tol) for i in range(3)])


@dataclass(frozen=True)
class GeneralizedTriangle:
    """Mutually consistent angles and opposite lengths of one triangle."""

    ttype: Tuple[int, int, int]
    angles: Tuple[float, float, float]
    lengths: Tuple[float, float, float]
    degenerate: bool = False

    @classmethod
    def from_angles(cls, ttype, angles) -> "GeneralizedTriangle":
        ttype = check_type(ttype)
        l = law_length_from_angles(ttype, angles)
        return cls(ttype, tuple(float(t) for t in angles), tuple(float(x) for x in l))

    @classmethod
    def from_lengths(cls, ttype, lengths) -> "GeneralizedTriangle":
        ttype = check_type(ttype)
        theta = law_angles_from_lengths(ttype, lengths)
        return cls(ttype, tuple(float(t) for t in theta), tuple(float(x) for x in lengths))

    @property
    def theta(self) -> np.ndarray:
        return np.array(self.angles)

    @property
    def l(self) -> np.ndarray:
        return np.array(self.lengths)

    def sine_ratios(self) -> np.ndarray:
        return sine_ratios(self)

    def to_dict(self) -> dict:
        return {"type": list(self.ttype), "angles": list(self.angles), "lengths": list(self.lengths)}


def sine_ratios(tri: GeneralizedTriangle) -> np.ndarray:
    """``rho(theta_i) / tau(l_i)`` for each corner; all three agree."""
    t, l, e = tri.theta, tri.l, tri.ttype
    return np.array([rho(e[i], t[i]) / tau(e[j] * e[k], l[i]) for i, j, k in _ROT])


def sas_third_side(ttype, l1: float, l2: float, theta: float) -> float:
    """Third side of an (eps, eps, delta) triangle from two sides and the included angle."""
    from .coords import d_membership

    ttype = check_type(ttype)
    eps, eps2, delta = ttype
    if eps != eps2:
        raise InputError(f"side-angle-side needs a type (eps, eps, delta), got {ttype}")
    if not d_membership(eps, delta, theta, l1, l2):
        raise_realizability(eps, delta, theta, l1, l2)
    if delta == 1 and theta == math.pi:
        return float(l1 + l2)
    if eps == -1:
        return _hyperideal_third_side(delta, l1, l2, theta)
    x = 2.0 * rho(delta, 0.5 * theta) ** 2 * tau(eps * delta, l1) * tau(eps * delta, l2) + eps * math.cosh(l1 - l2)
    return tau_prime_inverse(eps * eps, float(x), what="third side")


def sas_gap_terms(delta: int, l1: float, l2: float):
    """``(A, B)`` with A = -u(l1), B = -u(l2) in the u-coordinate of type -delta.

    An (-1, -1, delta) triangle with sides l1, l2 around theta exists
    exactly when theta > A + B.
    """
    if delta == 1:
        return 2.0 * math.atan(math.exp(-l1)), 2.0 * math.atan(math.exp(-l2))
    if delta == 0:
        return 2.0 * math.exp(-l1), 2.0 * math.exp(-l2)
    # -log tanh(l/2) = 2 atanh(exp(-l)), accurate for large l
    return 2.0 * math.atanh(math.exp(-l1)), 2.0 * math.atanh(math.exp(-l2))


def _hyperideal_third_side(delta, l1, l2, theta):
    # cosh l - 1 = 2 rho(p) rho(q) / (rho(A) rho(B)) with p, q = (theta +- (A+B)) / 2;
    # the product form keeps short sides accurate near the realizability boundary
    a, b = sas_gap_terms(delta, l1, l2)
    p, q = 0.5 * (theta + a + b), 0.5 * (theta - a - b)
    half = rho(delta, p) * rho(delta, q) / (rho(delta, a) * rho(delta, b))
    return 2.0 * math.asinh(math.sqrt(half))


def law_sas(ttype, l1: float, l2: float, theta: float, tol: float = DEGENERACY_TOL) -> Tuple[float, GeneralizedTriangle]:
    """Solve a (eps, eps, delta) triangle from two sides and the included angle.

    ``l1`` and ``l2`` are the sides opposite vertices 0 and 1; ``theta`` is the
    angle of type ``delta`` at vertex 2.  Returns the third side and the solved
    triangle.  ``theta = pi`` is accepted for ``delta = 1``; the result is then
    the degenerate configuration with ``l3 = l1 + l2`` and zero base angles.
    """
    ttype = check_type(ttype)
    l3 = sas_third_side(ttype, l1, l2, theta)
    lengths = (float(l1), float(l2), l3)
    if ttype[2] == 1 and theta == math.pi:
        return l3, GeneralizedTriangle(ttype, (0.0, 0.0, math.pi), lengths, degenerate=True)
    y = half_angle_values(ttype, lengths)
    a1 = half_angle_inverse(ttype[0], y[0], what="corner 0", tol=tol)
    a2 = half_angle_inverse(ttype[1], y[1], what="corner 1", tol=tol)
    return l3, GeneralizedTriangle(ttype, (a1, a2, float(theta)), lengths)


def raise_realizability(eps, delta, theta, l1, l2):
    from .errors import RealizabilityError

    raise RealizabilityError(
        f"no ({eps},{eps},{delta}) triangle with sides {l1!r}, {l2!r} and included angle {theta!r}"
    )


def gram_lengths(ttype, lengths) -> np.ndarray:
    e = check_type(ttype)
    l = np.asarray(lengths, dtype=float)
    c3 = tau_prime(e[0] * e[1], l[2])
    c2 = tau_prime(e[2] * e[0], l[1])
    c1 = tau_prime(e[1] * e[2], l[0])
    return -np.array([[e[0], c3, c2], [c3, e[1], c1], [c2, c1, e[2]]], dtype=float)


def gram_angles(ttype, angles) -> np.ndarray:
    e = check_type(ttype)
    t = np.asarray(angles, dtype=float)
    c1, c2, c3 = (rho_prime(e[i], t[i]) for i in range(3))
    return -np.array([[-1.0, c3, c2], [c3, -1.0, c1], [c2, c1, -1.0]])


def det3(a: np.ndarray) -> float:
    return float(
        a[0, 0] * (a[1, 1] * a[2, 2] - a[1, 2] * a[2, 1])
        - a[0, 1] * (a[1, 0] * a[2, 2] - a[1, 2] * a[2, 0])
        + a[0, 2] * (a[1, 0] * a[2, 1] - a[1, 1] * a[2, 0])
    )


def m_matrix(tri: GeneralizedTriangle) -> np.ndarray:
    """Diagonal scaling shared by both derivative cosine laws."""
    e = tri.ttype
    dl = det3(gram_lengths(e, tri.lengths))
    da = det3(gram_angles(e, tri.angles))
    if dl > -DEGENERACY_TOL or da > -DEGENERACY_TOL:
        raise DegenerateError(f"degenerate triangle: det G_l = {dl!r}, det G_theta = {da!r}")
    l = tri.l
    return np.diag([tau(e[j] * e[k], l[i]) for i, j, k in _ROT]) / math.sqrt(-dl)


def jacobian_dl_dtheta(tri: GeneralizedTriangle) -> np.ndarray:
    """``[d l_i / d theta_j]``."""
    return m_matrix(tri) @ gram_lengths(tri.ttype, tri.lengths)


def jacobian_dtheta_dl(tri: GeneralizedTriangle) -> np.ndarray:
    """``[d theta_i / d l_j]``."""
    return m_matrix(tri) @ gram_angles(tri.ttype, tri.angles)


def det_identity_rhs(tri: GeneralizedTriangle, i: int = 0) -> Tuple[float, float]:
    """Closed-form values of ``det G_l`` and ``det G_theta`` using corner ``i``."""
    e, t, l = tri.ttype, tri.theta, tri.l
    _, j, k = _ROT[i]
    gl = -(tau(e[k] * e[i], l[j]) * tau(e[i] * e[j], l[k]) * rho(e[i], t[i])) ** 2
    ga = -(rho(e[j], t[j]) * rho(e[k], t[k]) * tau(e[j] * e[k], l[i])) ** 2
    return float(gl), float(ga)
