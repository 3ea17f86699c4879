"""Generalized circle patterns on cellular surfaces.

Every edge vv' of a cellular decomposition, with faces f and f' on its two
sides, gives a quadrilateral (v, v', f*, f'*).  It is realized as the double
of an (eps, eps, delta) triangle f* f'* v whose sides at v are the dual radii
r(f*), r(f'*) and whose angle at v is theta(vv').  The curvature K_h(f*) sums
2 a(angle at f*) over the quadrilaterals around f*, with

    a(t) = int_1^t rho_eps^h,        w(l) = int_1^l tau_{eps*delta}^(h-1).

In w-coordinates K_h is the gradient of the strictly concave W = sum 2F, where
F is the closed 1-form a_1 dw_2 + a_2 dw_1 integrated per quadrilateral.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Optional, Tuple

import numpy as np
from scipy import integrate

from . import coords, trig
from .complexes import CellularSurface
from .errors import (
    ConvergenceError,
    DomainError,
    InputError,
    QuadratureError,
    RealizabilityError,
)
from .packing import ORIENTATIONS, Trajectory, flow_velocity, run_flow
from .solver import BoundaryContact, SolveResult, newton_maximize

_GL = np.polynomial.legendre.leggauss(6)


@dataclass(frozen=True)
class PatternConfig:
    eps: int
    delta: int
    h: float
    theta: Dict  # edge id -> angle in the open interval of type delta

    def __post_init__(self):
        trig.check_eps(self.eps)
        trig.check_eps(self.delta)
        if not math.isfinite(self.h):
            raise InputError(f"h must be finite, got {self.h!r}")
        object.__setattr__(self, "h", float(self.h))
        theta = {k: float(v) for k, v in dict(self.theta).items()}
        for e, t in theta.items():
            if not coords.in_I(self.delta, t, closed=False):
                raise InputError(f"angle {t!r} on edge {e!r} is outside the open interval of type {self.delta}")
        object.__setattr__(self, "theta", theta)

    def __hash__(self):
        return hash((self.eps, self.delta, self.h, tuple(sorted(self.theta.items(), key=lambda kv: str(kv[0])))))

    @property
    def epsdelta(self):
        return self.eps * self.delta

    @property
    def ttype(self):
        return (self.eps, self.eps, self.delta)

    @classmethod
    def uniform(cls, eps, delta, h, theta, surface: CellularSurface):
        return cls(eps, delta, h, {e: theta for e in surface.edge_ids})


# coordinates -------------------------------------------------------------------------

@lru_cache(maxsize=65536)
def a_coord(h: float, eps: int, t: float) -> float:
    return coords.a_from_theta(h, eps, t)


@lru_cache(maxsize=65536)
def w_coord(h: float, s: int, l: float) -> float:
    return coords.w_from_l(h, s, l)


def _l_of_w(h, s, w) -> float:
    try:
        return coords.l_from_w(h, s, w)
    except InputError as exc:
        # outside the image of w: no metric corresponds to this point
        raise DomainError(str(exc)) from None


def dual_radii(surface: CellularSurface, r) -> np.ndarray:
    if isinstance(r, dict):
        r = [r[f] if f in r else r[str(f)] for f in surface.face_ids]
    r = np.asarray(r, dtype=float)
    if r.shape != (surface.n_faces,):
        raise InputError(f"expected {surface.n_faces} dual radii, got shape {r.shape}")
    return r


def _check_radii(config, r):
    for k, x in enumerate(r):
        if not coords.in_J(config.epsdelta, x):
            raise InputError(f"radius {float(x)!r} at dual vertex {k} is outside J_{config.epsdelta}")


# one quadrilateral --------------------------------------------------------------------

def pattern_triangle(config: PatternConfig, edge, r_f: float, r_f2: float) -> trig.GeneralizedTriangle:
    """Triangle f* f'* v of the quadrilateral at ``edge``.

    Corner 0 is f*, corner 1 is f'*, corner 2 is v with angle theta(edge).
    """
    if edge not in config.theta:
        raise InputError(f"no angle given for edge {edge!r}")
    theta = config.theta[edge]
    try:
        # side opposite f* is v f'*, of length r(f'*)
        return trig.law_sas(config.ttype, r_f2, r_f, theta, tol=0.0)[1]
    except RealizabilityError:
        raise RealizabilityError(
            f"edge {edge!r}: radii ({float(r_f)!r}, {float(r_f2)!r}) with angle {theta!r} give no triangle"
        ) from None


def _solve_pair(config, theta3, l1, l2):
    """Angles (theta_1, theta_2) opposite l1, l2 and the third side."""
    l3, tri = trig.law_sas(config.ttype, l1, l2, theta3, tol=0.0)
    return tri.angles[0], tri.angles[1], l3, tri


def f_gradient(config: PatternConfig, theta3: float, w1: float, w2: float) -> np.ndarray:
    """(dF/dw1, dF/dw2) = (a_2, a_1): each w is paired with the other angle."""
    s = config.epsdelta
    l1, l2 = _l_of_w(config.h, s, w1), _l_of_w(config.h, s, w2)
    t1, t2, _, _ = _solve_pair(config, theta3, l1, l2)
    return np.array([a_coord(config.h, config.eps, t2), a_coord(config.h, config.eps, t1)])


def a_matrix(config: PatternConfig, theta3: float, l1: float, l2: float) -> np.ndarray:
    """The 2x2 matrix A with (dw1, dw2) = -A (da2, da1) / sqrt(-det G_l); symmetric by the sine law."""
    h, eps, s = config.h, config.eps, config.epsdelta
    t1, t2, l3, _ = _solve_pair(config, theta3, l1, l2)
    tp = trig.tau_prime(eps * eps, l3)
    b = np.array([[tp, eps], [eps, tp]], dtype=float)
    left = np.diag([trig.tau(s, l1) ** h, trig.tau(s, l2) ** h])
    right = np.diag([trig.rho(eps, t2) ** -h, trig.rho(eps, t1) ** -h])
    return left @ b @ right


def f_hessian(config: PatternConfig, theta3: float, w1: float, w2: float) -> np.ndarray:
    """Hessian of F in (w1, w2): -sqrt(-det G_l) A^{-1}."""
    s = config.epsdelta
    l1, l2 = _l_of_w(config.h, s, w1), _l_of_w(config.h, s, w2)
    _, _, _, tri = _solve_pair(config, theta3, l1, l2)
    det = trig.det3(trig.gram_lengths(tri.ttype, tri.lengths))
    if det >= 0.0:
        raise DomainError(f"degenerate triangle: det G_l = {det!r}")
    a = a_matrix(config, theta3, l1, l2)
    a = 0.5 * (a + a.T)
    return -math.sqrt(-det) * np.linalg.inv(a)


def _in_domain(config, theta3, w1, w2) -> bool:
    s = config.epsdelta
    try:
        l1, l2 = _l_of_w(config.h, s, w1), _l_of_w(config.h, s, w2)
        return coords.d_membership(config.eps, config.delta, theta3, l1, l2)
    except (DomainError, InputError):
        return False


def base_point(config: PatternConfig, theta3: float) -> Tuple[float, float]:
    """Base point of the line integral: the lengths l = (1, 1), i.e. w = (0, 0).

    If unit lengths give no triangle, the first diagonal point l = (L, L),
    L = 2, 4, 8, ..., inside the domain is used instead.
    """
    big = 1.0
    for _ in range(12):
        if coords.d_membership(config.eps, config.delta, theta3, big, big):
            w = w_coord(config.h, config.epsdelta, big)
            return w, w
        big *= 2.0
    raise RealizabilityError(f"no admissible base point for angle {theta3!r}")


def _segment(config, theta3, p, q):
    """Line integral of a_1 dw_2 + a_2 dw_1 along an axis-parallel segment."""
    if p[0] != q[0] and p[1] != q[1]:
        raise ValueError("segment must be axis parallel")
    if p == q:
        return 0.0
    if p[1] == q[1]:
        f = lambda x: f_gradient(config, theta3, x, p[1])[0]
        a, b = p[0], q[0]
    else:
        f = lambda x: f_gradient(config, theta3, p[0], x)[1]
        a, b = p[1], q[1]
    val, err = integrate.quad(f, a, b, epsabs=1e-13, epsrel=1e-13, limit=200)
    if not math.isfinite(val) or err > 1e-9 * max(1.0, abs(val)):
        raise QuadratureError(f"F-energy quadrature from {a!r} to {b!r} reached error {err:.3g}")
    return val


def _path(config, theta3, start, end):
    """Axis-parallel route inside the domain: one corner, else through max(w)."""
    corner = (end[0], start[1])
    if _in_domain(config, theta3, *corner):
        return [start, corner, end]
    # the domain is closed under lengthening either side, so climbing to the
    # common maximum first keeps every segment admissible
    m = max(start[0], start[1], end[0], end[1])
    route = [start, (m, start[1]), (m, m), (end[0], m), end]
    for pt in route:
        if not _in_domain(config, theta3, *pt):
            raise RealizabilityError(f"the integration path leaves the domain at w = {pt}")
    return route


def f_energy(config: PatternConfig, theta3: float, w1: float, w2: float, base=None) -> float:
    """F(w1, w2) by line integration from the base point."""
    if not _in_domain(config, theta3, w1, w2):
        raise RealizabilityError(f"w = ({w1!r}, {w2!r}) is outside the domain for angle {theta3!r}")
    start = base_point(config, theta3) if base is None else tuple(base)
    route = _path(config, theta3, start, (float(w1), float(w2)))
    return sum(_segment(config, theta3, route[k], route[k + 1]) for k in range(len(route) - 1))


def f_energy_diagonal(config: PatternConfig, theta3: float, w1: float, w2: float, base=None) -> float:
    """F along the straight segment from the base point (a second route for path independence)."""
    start = np.array(base_point(config, theta3) if base is None else base, dtype=float)
    d = np.array([w1, w2], dtype=float) - start

    def f(t):
        p = start + t * d
        return float(f_gradient(config, theta3, p[0], p[1]) @ d)

    val, err = integrate.quad(f, 0.0, 1.0, epsabs=1e-13, epsrel=1e-13, limit=200)
    if err > 1e-9 * max(1.0, abs(val)):
        raise QuadratureError(f"diagonal F quadrature reached error {err:.3g}")
    return val


# whole surfaces -----------------------------------------------------------------------

def _quads(surface: CellularSurface):
    fi = surface.face_index
    return [(q.edge, fi[q.f], fi[q.f2]) for q in surface.quadrilaterals()]


def kh_curvature(config: PatternConfig, surface: CellularSurface, r) -> np.ndarray:
    """K_h at every dual vertex, in face order."""
    r = dual_radii(surface, r)
    _check_radii(config, r)
    k = np.zeros(surface.n_faces)
    for e, i, j in _quads(surface):
        tri = pattern_triangle(config, e, r[i], r[j])
        k[i] += 2.0 * a_coord(config.h, config.eps, tri.angles[0])
        k[j] += 2.0 * a_coord(config.h, config.eps, tri.angles[1])
    return k


def w_of_r(config: PatternConfig, r) -> np.ndarray:
    return np.array([w_coord(config.h, config.epsdelta, float(x)) for x in r])


def r_of_w(config: PatternConfig, w) -> np.ndarray:
    return np.array([_l_of_w(config.h, config.epsdelta, float(x)) for x in w])


def pattern_hessian(config: PatternConfig, surface: CellularSurface, r) -> np.ndarray:
    """Hessian of W = sum 2F in w-coordinates, the derivative of K_h."""
    r = dual_radii(surface, r)
    w = w_of_r(config, r)
    hess = np.zeros((surface.n_faces, surface.n_faces))
    for e, i, j in _quads(surface):
        block = 2.0 * f_hessian(config, config.theta[e], w[i], w[j])
        idx = (i, j)
        for a in range(2):
            for b in range(2):
                hess[idx[a], idx[b]] += block[a, b]
    return hess


def w_energy(config: PatternConfig, surface: CellularSurface, w) -> float:
    """W(w) = sum over quadrilaterals of 2F, whose gradient is K_h."""
    w = np.asarray(w, dtype=float)
    total = 0.0
    for e, i, j in _quads(surface):
        total += 2.0 * f_energy(config, config.theta[e], w[i], w[j])
    return total


def pattern_energy_difference(config, surface, target, w0, w1) -> float:
    """V(w1) - V(w0) for V = W - <target, w>, by Gauss-Legendre along the segment."""
    w0, w1 = np.asarray(w0, dtype=float), np.asarray(w1, dtype=float)
    dw = w1 - w0
    x, wt = _GL
    total = 0.0
    for xi, wi in zip(x, wt):
        w = w0 + 0.5 * (xi + 1.0) * dw
        g = kh_curvature(config, surface, r_of_w(config, w)) - target
        total += 0.5 * wi * float(g @ dw)
    return total


def _start_w(config: PatternConfig, surface: CellularSurface) -> np.ndarray:
    """Equal radii L >= 1 with every quadrilateral comfortably realizable."""
    big = 1.0
    if config.eps == -1:
        tmin = min(config.theta[e] for e in surface.edge_ids)
        for _ in range(60):
            a, _ = trig.sas_gap_terms(config.delta, big, big)
            if 2.0 * a <= 0.5 * tmin:
                break
            big *= 1.5
    return np.full(surface.n_faces, w_coord(config.h, config.epsdelta, big))


def pattern_solve(
    config: PatternConfig,
    surface: CellularSurface,
    target,
    tol: float = 1e-12,
    max_iter: int = 100,
    r0=None,
) -> SolveResult:
    """Dual radii with K_h = ``target``; ``x`` of the result is r."""
    target = np.asarray(target, dtype=float)
    if target.shape != (surface.n_faces,) or not np.all(np.isfinite(target)):
        raise InputError(f"expected {surface.n_faces} finite target values")
    missing = [e for e in surface.edge_ids if e not in config.theta]
    if missing:
        raise InputError(f"no angle given for edges {missing}")
    w0 = _start_w(config, surface) if r0 is None else w_of_r(config, dual_radii(surface, r0))

    def grad(w):
        return kh_curvature(config, surface, r_of_w(config, w)) - target

    def hess(w):
        return pattern_hessian(config, surface, r_of_w(config, w))

    try:
        out = newton_maximize(
            grad,
            hess,
            w0,
            tol,
            max_iter,
            increase=lambda a, b: pattern_energy_difference(config, surface, target, a, b),
        )
    except BoundaryContact as exc:
        raise ConvergenceError(
            f"iterates reached the domain boundary with residual {exc.residual:.3g};"
            " the target may lie outside the image of K_h",
            residual=exc.residual,
        ) from None
    except ConvergenceError as exc:
        raise ConvergenceError(
            f"{exc}; the target may lie outside the image of K_h",
            iterations=exc.iterations,
            residual=exc.residual,
            last_step=exc.last_step,
        ) from None
    out.x = r_of_w(config, out.x)
    return out


def pattern_flow(
    config: PatternConfig,
    surface: CellularSurface,
    r0,
    target=None,
    dt: float = 0.01,
    steps: int = 1000,
    orientation: str = "stable",
    stop_tol: Optional[float] = None,
) -> Trajectory:
    """RK4 flow of the dual radii, dr/dt = +-(K_h - K^) tau(r)^(1-h).

    ``stable`` is the gradient ascent dw/dt = K_h - K^ of the concave
    V = W - <K^, w>; ``literal`` keeps the sign of the displayed ODE.
    """
    if orientation not in ORIENTATIONS:
        raise InputError(f"orientation must be one of {ORIENTATIONS}")
    r0 = dual_radii(surface, r0)
    _check_radii(config, r0)
    target = np.zeros(surface.n_faces) if target is None else np.asarray(target, dtype=float)
    s, h = config.epsdelta, config.h

    def vel(r):
        # an intermediate RK4 stage may leave J; the driver then halves the step
        if not all(coords.in_J(s, x) for x in r):
            raise DomainError("flow stage left the radius interval")
        tau_r = np.array([trig.tau(s, x) for x in r])
        return flow_velocity(kh_curvature(config, surface, r), target, tau_r, orientation, 1.0 - h)

    def feas(r):
        if not all(coords.in_J(s, x) for x in r):
            return False
        try:
            kh_curvature(config, surface, r)
        except (DomainError, InputError):
            return False
        return True

    return run_flow(
        vel,
        None,
        feas,
        lambda r: kh_curvature(config, surface, r),
        lambda k: k - target,
        lambda a, b: pattern_energy_difference(config, surface, target, w_of_r(config, a), w_of_r(config, b)),
        r0,
        dt,
        steps,
        stop_tol,
    )
