"""Generalized circle packings of type (eps, eps, delta).

Each vertex v carries a radius r(v) and each edge e a weight phi(e) of
vertex type delta.  The edge v_i v_j gets the length of the third side of
the (eps, eps, delta) triangle with sides r_i, r_j around the angle
phi(e); each face then becomes an (eps, eps, eps) triangle whose angles
sum at each vertex to the curvature K~(v).

In u-coordinates (du = dr / tau_{eps*delta}(r)) the curvature is the
gradient of a strictly concave energy W(u), and the prescribed curvature
problem is solved by Newton's method on W(u) - <K^, u>.
"""
from __future__ import annotations

import math
from fractions import Fraction
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from . import coords, trig
from .complexes import TriangulatedSurface
from .errors import (
    ConvergenceError,
    DegenerateError,
    DomainError,
    DomainExitError,
    InfeasibleError,
    InputError,
    RealizabilityError,
)
from .solver import BoundaryContact, SolveResult, newton_maximize, rk4_step

BOUNDARY_MARGIN = 1e-13


@dataclass(frozen=True)
class PackingConfig:
    eps: int
    delta: int
    phi: tuple  # one weight per edge, in edge order

    def __post_init__(self):
        trig.check_eps(self.eps)
        trig.check_eps(self.delta)
        object.__setattr__(self, "phi", tuple(float(p) for p in self.phi))
        for k, p in enumerate(self.phi):
            if not coords.in_I(self.delta, p):
                raise InputError(f"weight {p!r} on edge {k} is outside I_{self.delta}")

    @property
    def epsdelta(self):
        return self.eps * self.delta

    @classmethod
    def uniform(cls, eps, delta, phi, surface):
        return cls(eps, delta, (phi,) * surface.n_edges)


def _radii(surface, r):
    if isinstance(r, dict):
        r = [r[v] if v in r else r[str(v)] for v in surface.vertices]
    r = np.asarray(r, dtype=float)
    if r.shape != (surface.n_vertices,):
        raise InputError(f"expected {surface.n_vertices} radii, got shape {r.shape}")
    return r


def _check_radii(config, r):
    s = config.epsdelta
    for v, x in enumerate(r):
        if not coords.in_J(s, x):
            raise InputError(f"radius {float(x)!r} at vertex {v} is outside J_{s}")


def edge_length(config: PackingConfig, ri: float, rj: float, phi: float, edge=None):
    """Third side and SAS triangle for one edge."""
    try:
        return trig.law_sas((config.eps, config.eps, config.delta), ri, rj, phi, tol=0.0)
    except RealizabilityError:
        raise RealizabilityError(
            f"edge {edge}: radii ({ri!r}, {rj!r}) with weight {phi!r} give no triangle"
        ) from None


def packing_lengths(config: PackingConfig, surface: TriangulatedSurface, r) -> np.ndarray:
    r = _radii(surface, r)
    _check_radii(config, r)
    out = np.empty(surface.n_edges)
    for e, ((t, s), _) in enumerate(surface.edge_sides):
        a, b = surface.side_vertices(t, s)
        out[e] = edge_length(config, r[a], r[b], config.phi[e], e)[0]
    return out


@dataclass
class _Face:
    lengths: np.ndarray
    tri: trig.GeneralizedTriangle
    sas: list  # per side: SAS triangle with l1 = r(v_{s+1}), l2 = r(v_{s+2})


def _face(config, surface, r, t) -> _Face:
    c = surface.corners[t]
    sas, lengths = [], np.empty(3)
    for s in range(3):
        e = surface.edge_of[t][s]
        l, tri = edge_length(config, r[c[(s + 1) % 3]], r[c[(s + 2) % 3]], config.phi[e], e)
        lengths[s] = l
        sas.append(tri)
    ttype = (config.eps,) * 3
    try:
        theta = trig.law_angles_from_lengths(ttype, lengths, tol=0.0)
    except DomainError as exc:
        raise RealizabilityError(f"triangle {surface.triangles[t][0]!r}: {exc}") from None
    return _Face(lengths, trig.GeneralizedTriangle(ttype, tuple(theta), tuple(lengths)), sas)


def packing_angles(config: PackingConfig, surface: TriangulatedSurface, r, t: int) -> np.ndarray:
    """Angles of face ``t`` at its three corners."""
    r = _radii(surface, r)
    return _face(config, surface, r, t).tri.theta


def curvature_tilde(config: PackingConfig, surface: TriangulatedSurface, r) -> np.ndarray:
    """Sum of the generalized angles at each vertex."""
    r = _radii(surface, r)
    _check_radii(config, r)
    k = np.zeros(surface.n_vertices)
    for t in range(surface.n_faces):
        theta = _face(config, surface, r, t).tri.theta
        for i, v in enumerate(surface.corners[t]):
            k[v] += theta[i]
    return k


def classic_curvature(k_tilde) -> np.ndarray:
    """Cone-angle deficit 2 pi - K~ for (1,1,1) packings."""
    return 2.0 * math.pi - np.asarray(k_tilde)


def eps0_constant(config: PackingConfig, surface: TriangulatedSurface) -> np.ndarray:
    """C(v) with K~(v) = C(v) exp(-r(v)) for eps = 0 packings."""
    if config.eps != 0:
        raise InputError("the closed form needs eps = 0")
    d = config.delta
    c = np.zeros(surface.n_vertices)
    for t in range(surface.n_faces):
        ph = [config.phi[e] for e in surface.edge_of[t]]
        for k in range(3):
            i, j = (k + 1) % 3, (k + 2) % 3
            # corner k sits across side k from the edge with weight ph[k]
            c[surface.corners[t][k]] += 2.0 * trig.rho(d, 0.5 * ph[k]) / (
                trig.rho(d, 0.5 * ph[i]) * trig.rho(d, 0.5 * ph[j])
            )
    return c


def packing_jacobian(config: PackingConfig, surface: TriangulatedSurface, r, t: int) -> np.ndarray:
    """``[d theta_a / d u_b]`` for the corners of face ``t``."""
    coords.check_packing_case(config.eps, config.delta, [config.phi[e] for e in surface.edge_of[t]])
    r = _radii(surface, r)
    return _face_jacobian(config, surface, r, t)


def _face_jacobian(config, surface, r, t, face=None):
    face = face or _face(config, surface, r, t)
    eps = config.eps
    c = surface.corners[t]
    dl_dr = np.zeros((3, 3))
    for s in range(3):
        a1, a0 = face.sas[s].angles[1], face.sas[s].angles[0]
        # angle 1 of the SAS triangle sits at v_{s+1}, angle 0 at v_{s+2}
        dl_dr[s, (s + 1) % 3] = trig.rho_prime(eps, a1)
        dl_dr[s, (s + 2) % 3] = trig.rho_prime(eps, a0)
    tau_r = np.array([trig.tau(config.epsdelta, r[v]) for v in c])
    return trig.jacobian_dtheta_dl(face.tri) @ dl_dr @ np.diag(tau_r)


def packing_hessian(config: PackingConfig, surface: TriangulatedSurface, r) -> np.ndarray:
    """Hessian of W(u): the vertex assembly of the per-face Jacobians."""
    coords.check_packing_case(config.eps, config.delta, config.phi)
    r = _radii(surface, r)
    hess = np.zeros((surface.n_vertices, surface.n_vertices))
    for t in range(surface.n_faces):
        a = _face_jacobian(config, surface, r, t)
        c = surface.corners[t]
        for i in range(3):
            for j in range(3):
                hess[c[i], c[j]] += a[i, j]
    return hess


def _gradient_and_hessian(config, surface, r):
    k = np.zeros(surface.n_vertices)
    hess = np.zeros((surface.n_vertices, surface.n_vertices))
    for t in range(surface.n_faces):
        face = _face(config, surface, r, t)
        a = _face_jacobian(config, surface, r, t, face)
        c = surface.corners[t]
        for i in range(3):
            k[c[i]] += face.tri.angles[i]
            for j in range(3):
                hess[c[i], c[j]] += a[i, j]
    return k, hess


# u-space -------------------------------------------------------------------------

def u_of_r(config, r) -> np.ndarray:
    return np.array([coords.u_from_r(config.epsdelta, x) for x in r])


def r_of_u(config, u) -> np.ndarray:
    return np.array([coords.r_from_u(config.epsdelta, x) for x in u])


def u_feasible(config: PackingConfig, surface: TriangulatedSurface, u) -> bool:
    """Is ``u`` inside the open polyhedron of admissible radii (with margin)?"""
    u = np.asarray(u, dtype=float)
    # u -> 0 is r -> infinity; u keeps full relative precision there
    if not np.all(np.isfinite(u)) or np.any(u >= 0.0):
        return False
    if config.epsdelta == -1 and np.any(u <= -0.5 * math.pi + BOUNDARY_MARGIN):
        return False
    # very negative u can round r to the edge of J
    if not all(coords.in_J(config.epsdelta, x) for x in r_of_u(config, u)):
        return False
    if config.eps in (0, 1):
        return True
    for e, ((t, s), _) in enumerate(surface.edge_sides):
        a, b = surface.side_vertices(t, s)
        if u[a] + u[b] + config.phi[e] <= BOUNDARY_MARGIN:
            return False
    return True


def _start_u(config, surface):
    u1 = coords.u_from_r(config.epsdelta, 1.0)
    if config.eps != -1:
        return np.full(surface.n_vertices, u1)
    return np.full(surface.n_vertices, max(u1, -0.25 * min(config.phi)))


def packing_solve(
    config: PackingConfig,
    surface: TriangulatedSurface,
    target,
    tol: float = 1e-12,
    max_iter: int = 100,
    u0=None,
) -> SolveResult:
    """Radii whose curvature K~ equals ``target``.  ``x`` of the result is r."""
    coords.check_packing_case(config.eps, config.delta, config.phi)
    target = np.asarray(target, dtype=float)
    if target.shape != (surface.n_vertices,) or not np.all(np.isfinite(target)):
        raise InputError(f"expected {surface.n_vertices} finite target values")
    if config.eps in (0, -1) and np.any(target <= 0.0):
        raise InfeasibleError("generalized curvatures are positive; the target has a non-positive entry")
    if config.eps == 0:
        c = eps0_constant(config, surface)
        r = np.log(c / target)
        res = float(np.max(np.abs(curvature_tilde(config, surface, r) - target)))
        return SolveResult(r, 0, res, [res])

    start = _start_u(config, surface) if u0 is None else np.asarray(u0, dtype=float)
    if config.eps == -1:
        chart = _SlackChart(config, surface)
        try:
            out = chart.solve(target, chart.from_u(start), tol, max_iter)
        except BoundaryContact as exc:
            raise ConvergenceError(
                f"iterates reached the domain boundary with residual {exc.residual:.3g}", residual=exc.residual
            ) from None
        out.x = chart.radii(out.x)
        return out
    try:
        out = _newton(config, surface, target, start, tol, max_iter)
    except DegenerateError as exc:
        raise InfeasibleError(
            f"iterates approached degenerate triangles ({exc}); the target is likely outside the image polytope"
        ) from None
    except BoundaryContact as exc:
        raise InfeasibleError(
            f"iterates reached the domain boundary with residual {exc.residual:.3g};"
            " the target is likely outside the image polytope"
        ) from None
    out.x = r_of_u(config, out.x)
    return out


def _newton(config, surface, target, start, tol, max_iter):
    def grad(u):
        return curvature_tilde(config, surface, r_of_u(config, u)) - target

    def hess(u):
        return packing_hessian(config, surface, r_of_u(config, u))

    return newton_maximize(
        grad,
        hess,
        start,
        tol,
        max_iter,
        feasible=lambda u: u_feasible(config, surface, u),
        increase=lambda a, b: energy_difference(config, surface, target, a, b),
    )


# slack coordinates for eps = -1 ------------------------------------------------------

def _log_rho_prime(delta, x):
    """rho'/rho of type delta."""
    if delta == 1:
        return math.cos(x) / math.sin(x)
    if delta == 0:
        return 1.0 / x
    return math.cosh(x) / math.sinh(x)


def _exact_inverse(mat):
    """Inverse of a small integer matrix over the rationals; None if singular."""
    n = len(mat)
    a = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [v / p for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [v - f * w for v, w in zip(a[r], a[col])]
    return [row[n:] for row in a]


class _SlackChart:
    """Newton coordinates for eps = -1 packings.

    The admissible u form an open polyhedron cut out by linear slacks:
    -u_v > 0, u_v + pi/2 > 0 (when eps*delta = -1) and u_a + u_b + phi_e > 0
    per edge.  A chart uses V independent slacks as coordinates, preferring
    the smallest ones, so that the slacks which control the short edges keep
    full relative precision.  The curvature diverges only like -2 log(slack)
    at the boundary, so large targets need slacks far below the spacing of
    doubles near u.
    """

    TIGHT = 0.1

    def __init__(self, config: PackingConfig, surface: TriangulatedSurface):
        self.config, self.surface = config, surface
        nv = surface.n_vertices
        rows, offs = [], []
        for v in range(nv):
            row = [0] * nv
            row[v] = -1
            rows.append(row)
            offs.append(0.0)
        self.lower = []
        if config.epsdelta == -1:
            for v in range(nv):
                row = [0] * nv
                row[v] = 1
                self.lower.append(len(rows))
                rows.append(row)
                offs.append(0.5 * math.pi)
        self.edge_rows, self.ends = [], []
        for e, ((t, side), _) in enumerate(surface.edge_sides):
            a, b = surface.side_vertices(t, side)
            row = [0] * nv
            row[a] += 1
            row[b] += 1
            self.edge_rows.append(len(rows))
            self.ends.append((a, b))
            rows.append(row)
            offs.append(config.phi[e])
        self.rows, self.offs = rows, offs
        self.set_chart(list(range(nv)))

    def set_chart(self, idx):
        inv = _exact_inverse([self.rows[i] for i in idx])
        if inv is None:
            raise ValueError("chart slacks are dependent")
        nv = len(idx)
        self.idx = list(idx)
        self.c = np.array([self.rows[i] for i in idx], dtype=float)
        self.cinv = np.array([[float(v) for v in row] for row in inv])
        base = [Fraction(self.offs[i]) for i in idx]
        p, off = [], []
        for row, o in zip(self.rows, self.offs):
            coef = [sum(Fraction(row[m]) * inv[m][k] for m in range(nv)) for k in range(nv)]
            p.append([float(c) for c in coef])
            off.append(float(Fraction(o) - sum(c * b for c, b in zip(coef, base))))
        self.p, self.off = np.array(p), np.array(off)

    def slacks(self, y):
        return self.p @ y + self.off

    def from_u(self, u):
        return np.array([sum(r * x for r, x in zip(self.rows[i], u)) + self.offs[i] for i in self.idx])

    def u(self, y):
        return -self.slacks(y)[: self.surface.n_vertices]

    def radii(self, y):
        s = self.slacks(y)
        nv = self.surface.n_vertices
        r = np.empty(nv)
        for v in range(nv):
            if self.lower and s[self.lower[v]] < 0.5:
                # u + pi/2 is the Gudermannian of r
                r[v] = math.asinh(math.tan(s[self.lower[v]]))
            else:
                r[v] = coords.r_from_u(self.config.epsdelta, -s[v])
        return r

    def feasible(self, y):
        s = self.slacks(y)
        return bool(np.all(np.isfinite(s)) and np.all(s > 0.0))

    def rechart(self, y):
        s = self.slacks(y)
        order = sorted((i for i in range(len(s)) if s[i] < self.TIGHT), key=lambda i: (s[i], i))
        order += [i for i in range(len(s)) if s[i] >= self.TIGHT]
        chosen, mats = [], []
        for i in order:
            if len(chosen) == len(y):
                break
            trial = mats + [self.rows[i]]
            if _rank(trial) == len(trial):
                chosen.append(i)
                mats = trial
        if sorted(chosen) == sorted(self.idx):
            return y
        self.set_chart(chosen)
        return s[chosen]

    def _edges(self, s):
        d = self.config.delta
        lengths, dl = np.empty(len(self.ends)), []
        for e, (a, b) in enumerate(self.ends):
            big_a, big_b, gap = s[a], s[b], s[self.edge_rows[e]]
            p, q = 0.5 * (self.config.phi[e] + big_a + big_b), 0.5 * gap
            half = trig.rho(d, p) * trig.rho(d, q) / (trig.rho(d, big_a) * trig.rho(d, big_b))
            lengths[e] = 2.0 * math.asinh(math.sqrt(half))
            th = math.sqrt(half / (1.0 + half))
            cp = _log_rho_prime(d, p)
            # dl = tanh(l/2) d log(half), with dp = (dA + dB)/2 and dq = d(gap)/2
            row = th * (
                0.5 * _log_rho_prime(d, q) * self.p[self.edge_rows[e]]
                + (0.5 * cp - _log_rho_prime(d, big_a)) * self.p[a]
                + (0.5 * cp - _log_rho_prime(d, big_b)) * self.p[b]
            )
            dl.append(row)
        return lengths, np.array(dl)

    def curvature(self, y, with_jacobian=False):
        """K~ and, optionally, its derivative in the chart coordinates."""
        s = self.slacks(y)
        lengths, dl = self._edges(s)
        surf = self.surface
        nv = surf.n_vertices
        k = np.zeros(nv)
        jac = np.zeros((nv, nv)) if with_jacobian else None
        ttype = (-1, -1, -1)
        for t in range(surf.n_faces):
            idx = list(surf.edge_of[t])
            fl = lengths[idx]
            theta = trig.law_angles_from_lengths(ttype, fl, tol=0.0)
            for i, v in enumerate(surf.corners[t]):
                k[v] += theta[i]
            if with_jacobian:
                tri = trig.GeneralizedTriangle(ttype, tuple(theta), tuple(fl))
                # sqrt(-det G_l) in product form; the 3x3 determinant cancels badly here
                root = math.sqrt(-trig.det_identity_rhs(tri, 0)[0])
                m = np.diag([trig.tau(1, x) for x in fl]) / root
                dtheta = m @ trig.gram_angles(ttype, theta) @ dl[idx]
                for i, v in enumerate(surf.corners[t]):
                    jac[v] += dtheta[i]
        return k, jac

    def solve(self, target, y0, tol, max_iter):
        def grad(y):
            return self.cinv.T @ (self.curvature(y)[0] - target)

        def hess(y):
            jac = self.curvature(y, True)[1]
            h = self.cinv.T @ jac
            # the two triangles of the symmetric matrix are computed by different
            # sums; keep the entry whose sum suffered less cancellation
            err = np.abs(self.cinv.T) @ np.abs(jac)
            return np.where(err <= err.T, h, h.T)

        def increase(y0, y1):
            dy = y1 - y0
            x, w = _GL
            return sum(0.5 * wi * float(grad(y0 + 0.5 * (xi + 1.0) * dy) @ dy) for xi, wi in zip(x, w))

        return newton_maximize(
            grad,
            hess,
            y0,
            tol,
            max_iter,
            feasible=self.feasible,
            increase=increase,
            reparametrize=self.rechart,
            residual=lambda y, g: float(np.max(np.abs(self.c.T @ g))),
            noise_scale=np.zeros_like,
        )




def _rank(rows):
    m = [[Fraction(v) for v in row] for row in rows]
    rank, ncol = 0, len(m[0])
    for col in range(ncol):
        piv = next((r for r in range(rank, len(m)) if m[r][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][col] != 0:
                f = m[r][col] / m[rank][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


# energy and flow -------------------------------------------------------------------

_GL = np.polynomial.legendre.leggauss(6)


def energy_difference(config, surface, target, u0, u1) -> float:
    """V(u1) - V(u0) for V(u) = W(u) - <target, u>, by quadrature along the segment.

    The domain is convex and V is smooth, so the segment integral of the
    gradient is exact up to the quadrature error.
    """
    u0, u1 = np.asarray(u0, dtype=float), np.asarray(u1, dtype=float)
    du = u1 - u0
    x, w = _GL
    total = 0.0
    for xi, wi in zip(x, w):
        u = u0 + 0.5 * (xi + 1.0) * du
        g = curvature_tilde(config, surface, r_of_u(config, u)) - target
        total += 0.5 * wi * float(g @ du)
    return total


@dataclass
class Trajectory:
    times: List[float] = field(default_factory=list)
    states: List[np.ndarray] = field(default_factory=list)
    curvatures: List[np.ndarray] = field(default_factory=list)
    gradnorms: List[float] = field(default_factory=list)
    energies: List[float] = field(default_factory=list)  # V(t) - V(0)
    stopped: str = "steps"

    @property
    def final(self):
        return self.states[-1]

    def rows(self):
        for t, r, k, g in zip(self.times, self.states, self.curvatures, self.gradnorms):
            yield [t, *r.tolist(), *k.tolist(), g]


ORIENTATIONS = ("stable", "literal")


def flow_velocity(k, target, tau_r, orientation="stable", power=1.0):
    """dr/dt for curvature ``k``; ``literal`` keeps the sign of the displayed ODE."""
    sign = 1.0 if orientation == "stable" else -1.0
    return sign * (k - target) * tau_r ** power


def run_flow(
    velocity,
    to_coord,
    feasible,
    curvature,
    gradient,
    energy_step,
    r0,
    dt,
    steps,
    stop_tol=None,
    max_halvings=20,
):
    """Shared RK4 driver for the packing and pattern flows."""
    if dt <= 0:
        raise InputError("dt must be positive")
    r = np.array(r0, dtype=float)
    traj = Trajectory()
    k = curvature(r)
    g = gradient(k)
    traj.times.append(0.0)
    traj.states.append(r.copy())
    traj.curvatures.append(k)
    traj.gradnorms.append(float(np.max(np.abs(g))))
    traj.energies.append(0.0)
    t, energy = 0.0, 0.0
    for _ in range(steps):
        if stop_tol is not None and traj.gradnorms[-1] <= stop_tol:
            traj.stopped = "tolerance"
            break
        h = dt
        for _ in range(max_halvings):
            try:
                new = rk4_step(velocity, r, h)
                if np.all(np.isfinite(new)) and feasible(new):
                    k_new = curvature(new)
                    break
            except (DomainError, OverflowError):
                pass
            h *= 0.5
        else:
            raise DomainExitError(f"flow left the domain at t = {t:.6g}", last_state=r.copy())
        energy += energy_step(r, new)
        r, k, t = new, k_new, t + h
        g = gradient(k)
        traj.times.append(t)
        traj.states.append(r.copy())
        traj.curvatures.append(k)
        traj.gradnorms.append(float(np.max(np.abs(g))))
        traj.energies.append(energy)
    return traj


def packing_flow(
    config: PackingConfig,
    surface: TriangulatedSurface,
    r0,
    target=None,
    dt: float = 0.01,
    steps: int = 1000,
    orientation: str = "stable",
    stop_tol: Optional[float] = None,
) -> Trajectory:
    """Integrate the curvature flow of the radii with RK4.

    ``stable``: dr/dt = (K~ - K^) tau(r), the gradient ascent of the concave
    V(u) = W(u) - <K^, u>, which converges to the prescribed curvature.
    ``literal``: the opposite sign, dr/dt = -(K~ - K^) tau(r).
    """
    if orientation not in ORIENTATIONS:
        raise InputError(f"orientation must be one of {ORIENTATIONS}")
    r0 = _radii(surface, r0)
    _check_radii(config, r0)
    target = np.zeros(surface.n_vertices) if target is None else np.asarray(target, dtype=float)
    s = config.epsdelta

    def vel(r):
        # an intermediate RK4 stage may leave J; the driver then halves the step
        if not all(coords.in_J(s, x) for x in r):
            raise DomainError("flow stage left the radius interval")
        tau_r = np.array([trig.tau(s, x) for x in r])
        return flow_velocity(curvature_tilde(config, surface, r), target, tau_r, orientation)

    def feas(r):
        if not all(coords.in_J(s, x) for x in r):
            return False
        return u_feasible(config, surface, u_of_r(config, r))

    return run_flow(
        vel,
        None,
        feas,
        lambda r: curvature_tilde(config, surface, r),
        lambda k: k - target,
        lambda a, b: energy_difference(config, surface, target, u_of_r(config, a), u_of_r(config, b)),
        r0,
        dt,
        steps,
        stop_tol,
    )


def limit_decay(eps: int, delta: int, phi, r_i: float, r_j: float, R: float) -> float:
    """Angle at the third vertex when its radius is R (eps = -1 packings).

    ``phi[k]`` is the weight of the edge opposite vertex k; vertex 2 has radius R.
    """
    if eps != -1:
        raise InputError("the decay statement concerns eps = -1")
    config = PackingConfig(eps, delta, tuple(phi))
    r = (r_i, r_j, R)
    l = np.empty(3)
    for k in range(3):
        a, b = r[(k + 1) % 3], r[(k + 2) % 3]
        l[k] = trig.sas_third_side((eps, eps, delta), a, b, config.phi[k])
    y = trig.half_angle_values((-1, -1, -1), l)[2]
    return trig.half_angle_inverse(-1, float(y), "corner 2", tol=0.0)
