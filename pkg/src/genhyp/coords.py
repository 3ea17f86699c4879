"""Realizability domains and the coordinate changes used by the energies.

u(r) = -int_r^inf dt / tau_{ed}(t)       (packing radii)
w(l) = int_1^l tau_{ed}(t)^(h-1) dt      (pattern radii)
a(t) = int_1^t rho_e(s)^h ds             (pattern angles)

All three maps are strictly increasing.  ``ed`` is the product eps*delta.
"""
from __future__ import annotations

import math
import warnings

import numpy as np
from scipy import integrate, optimize

from . import trig
from .errors import DomainError, InputError, QuadratureError, UnsupportedCaseError

QUAD_TOL = 1e-12


def in_I(delta: int, x: float, closed: bool = True) -> bool:
    """Membership in I_delta; ``closed=False`` gives the open interval."""
    if not math.isfinite(x) or x <= 0.0:
        return False
    if delta == 1:
        return x <= math.pi if closed else x < math.pi
    return True


def in_J(s: int, x: float) -> bool:
    if not math.isfinite(x):
        return False
    return True if s == 0 else x > 0.0


def d_membership(eps: int, delta: int, theta: float, l1: float, l2: float) -> bool:
    """Does an (eps, eps, delta) triangle with sides l1, l2 and included angle theta exist?"""
    eps, delta = trig.check_eps(eps), trig.check_eps(delta)
    if not in_I(delta, theta, closed=(delta == 1)):
        raise InputError(f"angle {theta!r} outside the interval for vertex type {delta}")
    s = eps * delta
    if not (in_J(s, l1) and in_J(s, l2)):
        raise InputError(f"sides ({l1!r}, {l2!r}) outside the interval J_{s}")
    if eps in (0, 1):
        return True
    # equivalent to the cosine-law value of the third side exceeding 1, written
    # in the factored form theta > A + B; for delta = 0 this reads
    # theta > 2 (exp(-l1) + exp(-l2))
    a, b = trig.sas_gap_terms(delta, l1, l2)
    return theta - a - b > 0.0


def check_packing_case(eps: int, delta: int, phi) -> None:
    if eps == 1 and delta != 1:
        raise UnsupportedCaseError(f"prescribed curvature is not available for type (1,1,{delta})")
    if eps == 1 and any(p < 0.5 * math.pi for p in phi):
        raise UnsupportedCaseError("type (1,1,1) packings need every weight in [pi/2, pi]")


def m_membership(eps: int, delta: int, phi, r) -> bool:
    """Do radii r on one triangle with edge weights phi give a genuine triangle?

    ``phi[k]`` is the weight of the edge opposite vertex k.
    """
    eps, delta = trig.check_eps(eps), trig.check_eps(delta)
    check_packing_case(eps, delta, phi)
    for p in phi:
        if not in_I(delta, p):
            raise InputError(f"weight {p!r} outside I_{delta}")
    s = eps * delta
    if not all(in_J(s, x) for x in r):
        raise InputError(f"radii {tuple(r)} outside J_{s}")
    if eps == 1:
        return True
    lengths = []
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        # edge v_i v_j is opposite v_k
        if not d_membership(eps, delta, phi[k], r[i], r[j]):
            return False
        try:
            lengths.append(trig.law_sas((eps, eps, delta), r[i], r[j], phi[k])[0])
        except DomainError:
            return False
    try:
        trig.law_angles_from_lengths((eps, eps, eps), [lengths[1], lengths[2], lengths[0]])
    except DomainError:
        return False
    return True


# u coordinates ---------------------------------------------------------------

def u_from_r(epsdelta: int, r: float) -> float:
    if not in_J(epsdelta, r):
        raise InputError(f"radius {r!r} outside J_{epsdelta}")
    if epsdelta == 1:
        # log tanh(r/2), written to keep relative accuracy as r grows
        x = math.exp(-r)
        return math.log1p(-2.0 * x / (1.0 + x))
    if epsdelta == -1:
        return -2.0 * math.atan(math.exp(-r))
    return -2.0 * math.exp(-r)


def r_from_u(epsdelta: int, u: float) -> float:
    if not math.isfinite(u) or u >= 0.0:
        raise InputError(f"u = {u!r} must be negative")
    if epsdelta == 1:
        return math.log((1.0 + math.exp(u)) / -math.expm1(u))
    if epsdelta == -1:
        if u <= -0.5 * math.pi:
            raise InputError(f"u = {u!r} must exceed -pi/2")
        return -math.log(math.tan(-0.5 * u))
    return -math.log(-0.5 * u)


def dr_du(epsdelta: int, r: float) -> float:
    return float(trig.tau(epsdelta, r))


# w and a coordinates -----------------------------------------------------------

def _quad(f, a, b, what):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        val, err = integrate.quad(f, a, b, epsabs=QUAD_TOL, epsrel=QUAD_TOL, limit=200)
    if not math.isfinite(val) or err > 100 * QUAD_TOL * max(1.0, abs(val)):
        raise QuadratureError(f"{what}: integral from {a!r} to {b!r} reached error {err:.3g}")
    return val


def _w_closed(h, s, l):
    if h == 1:
        return l - 1.0
    if s == 0:
        c = 2.0 ** (1.0 - h)
        return c * (math.exp((h - 1.0) * l) - math.exp(h - 1.0)) / (h - 1.0)
    if h == 0:
        if s == 1:
            return math.log(math.tanh(0.5 * l)) - math.log(math.tanh(0.5))
        return 2.0 * (math.atan(math.exp(l)) - math.atan(math.e))
    if h == 2:
        return math.cosh(l) - math.cosh(1.0) if s == 1 else math.sinh(l) - math.sinh(1.0)
    if h == -1:
        if s == 1:
            return 1.0 / math.tanh(1.0) - 1.0 / math.tanh(l)
        return math.tanh(l) - math.tanh(1.0)
    return None


def w_from_l(h: float, epsdelta: int, l: float, method: str = "auto") -> float:
    """``int_1^l tau_{ed}^(h-1)``; ``method='quad'`` skips the closed forms."""
    if not in_J(epsdelta, l):
        raise InputError(f"length {l!r} outside J_{epsdelta}")
    if method == "auto":
        v = _w_closed(h, epsdelta, l)
        if v is not None:
            return v
    return _quad(lambda t: float(trig.tau(epsdelta, t)) ** (h - 1.0), 1.0, l, "w coordinate")


def _a_closed(h, eps, t):
    if h == 0:
        return t - 1.0
    if eps == 0:
        if h == -1:
            return math.log(t)
        return (t ** (h + 1.0) - 1.0) / (h + 1.0)
    if h == 1:
        return math.cos(1.0) - math.cos(t) if eps == 1 else math.cosh(t) - math.cosh(1.0)
    if h == -1:
        if eps == 1:
            return math.log(math.tan(0.5 * t)) - math.log(math.tan(0.5))
        return math.log(math.tanh(0.5 * t)) - math.log(math.tanh(0.5))
    if h == 2:
        if eps == 1:
            return 0.5 * (t - 1.0) - 0.25 * (math.sin(2.0 * t) - math.sin(2.0))
        return 0.25 * (math.sinh(2.0 * t) - math.sinh(2.0)) - 0.5 * (t - 1.0)
    return None


def a_from_theta(h: float, eps: int, theta: float, method: str = "auto") -> float:
    """``int_1^theta rho_eps^h``."""
    if not in_I(eps, theta, closed=False):
        raise InputError(f"angle {theta!r} outside the open interval for type {eps}")
    if method == "auto":
        v = _a_closed(h, eps, theta)
        if v is not None:
            return v
    return _quad(lambda t: float(trig.rho(eps, t)) ** h, 1.0, theta, "a coordinate")


def _invert(f, target, lo_bound, hi_bound, what):
    """Solve f(x) = target for increasing f on (lo_bound, hi_bound)."""

    def probe(x, side):
        # quadrature breaking down next to a singular endpoint means the
        # target lies beyond the attainable range
        try:
            return f(x)
        except (QuadratureError, OverflowError):
            raise InputError(f"{what}: value {target!r} is {side} the range") from None

    lo, hi, step = 1.0, 1.0, 1.0
    for _ in range(80):
        lo = max(1.0 - step, 0.5 * (lo_bound + lo)) if lo_bound > -math.inf else 1.0 - step
        if probe(lo, "below") <= target:
            break
        step *= 2.0
    else:
        raise InputError(f"{what}: value {target!r} is below the range")
    step = 1.0
    for _ in range(80):
        hi = min(1.0 + step, 0.5 * (hi_bound + hi)) if hi_bound < math.inf else 1.0 + step
        if probe(hi, "above") >= target:
            break
        step *= 2.0
    else:
        raise InputError(f"{what}: value {target!r} is above the range")
    if f(lo) == target:
        return lo
    return optimize.brentq(lambda x: f(x) - target, lo, hi, xtol=1e-15, maxiter=200)


def l_from_w(h: float, epsdelta: int, w: float) -> float:
    if h == 1:
        if not in_J(epsdelta, w + 1.0):
            raise InputError(f"w coordinate: value {w!r} is below the range")
        return w + 1.0
    lo = -math.inf if epsdelta == 0 else 0.0
    return _invert(lambda x: w_from_l(h, epsdelta, x), w, lo, math.inf, "w coordinate")


def theta_from_a(h: float, eps: int, a: float) -> float:
    if h == 0:
        if not in_I(eps, a + 1.0, closed=False):
            raise InputError(f"a coordinate: value {a!r} is outside the range")
        return a + 1.0
    hi = math.pi if eps == 1 else math.inf
    return _invert(lambda x: a_from_theta(h, eps, x), a, 0.0, hi, "a coordinate")
