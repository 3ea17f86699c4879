"""Decorated ideal triangles on an ideally triangulated surface.

Lengths are the (signed) horocyclic-decorated edge lengths l in R^E.  In a
decorated ideal triangle the angles are theta_i = 2 exp((l_i - l_j - l_k)/2)
and the radius invariants are x_i = (theta_j + theta_k - theta_i) / 2.  The
edge invariant of an edge sums the radius invariants of its two incidences.
"""
from __future__ import annotations

import math
from typing import Optional

import numpy as np

from .complexes import EdgeCycle, TriangulatedSurface, enumerate_edge_cycles
from .errors import InfeasibleError, InputError, ValidationError
from .solver import BoundaryContact, SolveResult, newton_maximize
from .errors import ConvergenceError

_ROT = ((0, 1, 2), (1, 2, 0), (2, 0, 1))
_EXP_MAX = math.log(np.finfo(float).max)


def ideal_angles(l) -> np.ndarray:
    l = np.asarray(l, dtype=float)
    ex = 0.5 * np.array([l[i] - l[j] - l[k] for i, j, k in _ROT])
    if np.any(ex > _EXP_MAX - 1.0) or not np.all(np.isfinite(ex)):
        raise OverflowError(f"angle exponent out of range for lengths {l.tolist()}")
    return 2.0 * np.exp(ex)


def radius_invariants(l) -> np.ndarray:
    t = ideal_angles(l)
    return np.array([0.5 * (t[j] + t[k] - t[i]) for i, j, k in _ROT])


def triangle_energy_W(l) -> float:
    """Concave energy of one triangle, normalized by W(0) = 0."""
    return 6.0 - float(np.sum(ideal_angles(l)))


def triangle_energy_gradient(l) -> np.ndarray:
    return radius_invariants(l)


def triangle_energy_hessian(l) -> np.ndarray:
    t = ideal_angles(l)
    x = np.array([0.5 * (t[j] + t[k] - t[i]) for i, j, k in _ROT])
    hess = np.empty((3, 3))
    for i, j, k in _ROT:
        hess[i, i] = -0.25 * t.sum()
        hess[i, j] = 0.5 * x[k]
        hess[i, k] = 0.5 * x[j]
    return hess


def _as_edge_vector(surface: TriangulatedSurface, values, what="length") -> np.ndarray:
    if isinstance(values, dict):
        values = [values[k] if k in values else values[str(k)] for k in surface.edge_ids]
    v = np.asarray(values, dtype=float)
    if v.shape != (surface.n_edges,):
        raise InputError(f"expected {surface.n_edges} edge {what}s, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise InputError(f"edge {what}s must be finite")
    return v


def _check_surface(surface: TriangulatedSurface):
    if surface.punctured_euler_characteristic >= 0:
        raise ValidationError(
            f"the punctured surface has Euler characteristic {surface.punctured_euler_characteristic}, need < 0"
        )


def triangle_lengths(surface: TriangulatedSurface, l, t: int) -> np.ndarray:
    return l[list(surface.edge_of[t])]


def psi_map(surface: TriangulatedSurface, metric) -> np.ndarray:
    """Edge invariants of the decorated metric ``metric`` (one value per edge)."""
    _check_surface(surface)
    l = _as_edge_vector(surface, metric)
    z = np.zeros(surface.n_edges)
    for t in range(surface.n_faces):
        x = radius_invariants(triangle_lengths(surface, l, t))
        for s in range(3):
            z[surface.edge_of[t][s]] += x[s]
    return z


def energy_H(surface: TriangulatedSurface, metric) -> float:
    l = _as_edge_vector(surface, metric)
    return sum(triangle_energy_W(triangle_lengths(surface, l, t)) for t in range(surface.n_faces))


def psi_hessian(surface: TriangulatedSurface, metric) -> np.ndarray:
    l = _as_edge_vector(surface, metric)
    hess = np.zeros((surface.n_edges, surface.n_edges))
    for t in range(surface.n_faces):
        idx = list(surface.edge_of[t])
        block = triangle_energy_hessian(l[idx])
        for a in range(3):
            for b in range(3):
                hess[idx[a], idx[b]] += block[a, b]
    return hess


def polytope_check(surface: TriangulatedSurface, z, cycles=None, cap: int = 10**6):
    """Is every edge-cycle sum of ``z`` positive?  Returns ``(ok, witness)``.

    The witness is the cycle with the smallest sum when the check fails.
    """
    z = _as_edge_vector(surface, z, "value")
    if cycles is None:
        cycles = enumerate_edge_cycles(surface, 2, cap)
    worst, worst_sum = None, math.inf
    for c in cycles:
        s = float(sum(z[e] for e in c.edges))
        if s < worst_sum:
            worst, worst_sum = c, s
    if worst_sum > 0.0:
        return True, None
    return False, worst


def psi_solve(
    surface: TriangulatedSurface,
    z,
    tol: float = 1e-12,
    max_iter: int = 100,
    check: bool = True,
    cap: int = 10**6,
) -> SolveResult:
    """Lengths whose edge invariants equal ``z``, by Newton on H(l) - <z, l>."""
    _check_surface(surface)
    z = _as_edge_vector(surface, z, "value")
    if check:
        ok, witness = polytope_check(surface, z, cap=cap)
        if not ok:
            cyc = witness.alternating(surface)
            raise InfeasibleError(f"edge cycle {cyc} has non-positive sum", witness=witness)
    try:
        return newton_maximize(
            lambda l: psi_map(surface, l) - z,
            lambda l: psi_hessian(surface, l),
            np.zeros(surface.n_edges),
            tol=tol,
            max_iter=max_iter,
        )
    except (BoundaryContact, OverflowError) as exc:
        raise ConvergenceError(f"Newton iteration broke down: {exc}") from None


def edge_cycle_sum_identity(surface: TriangulatedSurface, metric, cycle: EdgeCycle):
    """Cycle sum of edge invariants, and the sum of the corner angles it turns through."""
    l = _as_edge_vector(surface, metric)
    z = psi_map(surface, l)
    lhs = float(sum(z[e] for e in cycle.edges))
    rhs = 0.0
    for t, corner in cycle.corners:
        rhs += float(ideal_angles(triangle_lengths(surface, l, t))[corner])
    return lhs, rhs
