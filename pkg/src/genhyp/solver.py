"""Damped Newton iteration for maximizing a strictly concave function."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np

from .errors import ConvergenceError, DomainError

MAX_HALVINGS = 60
EPS = float(np.finfo(float).eps)


@dataclass
class SolveResult:
    x: np.ndarray
    iterations: int
    residual: float
    history: List[float] = field(default_factory=list)


class BoundaryContact(Exception):
    """Line search could not find an admissible step."""

    def __init__(self, x, residual):
        super().__init__("line search stalled at the domain boundary")
        self.x = x
        self.residual = residual


def newton_maximize(
    gradient: Callable[[np.ndarray], np.ndarray],
    hessian: Callable[[np.ndarray], np.ndarray],
    x0,
    tol: float = 1e-12,
    max_iter: int = 100,
    feasible: Optional[Callable[[np.ndarray], bool]] = None,
    increase: Optional[Callable[[np.ndarray, np.ndarray], float]] = None,
    reparametrize: Optional[Callable[[np.ndarray], np.ndarray]] = None,
    residual: Optional[Callable[[np.ndarray, np.ndarray], float]] = None,
    noise_scale: Optional[Callable[[np.ndarray], np.ndarray]] = None,
) -> SolveResult:
    """Find the critical point of a concave function from its gradient and Hessian.

    Steps are halved until the trial point is feasible and either the
    objective rises by the Armijo amount (when ``increase(x, y)``, the change
    of the objective from x to y, is given) or the gradient norm drops.  The
    gradient callable may raise DomainError for points outside the domain;
    such points count as infeasible.

    The iterate is also accepted once the residual is within the evaluation
    noise floor 8 eps |H| s, since no step can then be resolved in floating
    point.  The scale s defaults to max(1, |x|) in every coordinate.

    Optional hooks: ``reparametrize(x)`` may switch coordinates at the start
    of an iteration (returning the same object when nothing changes), and
    ``residual(x, g)`` measures convergence (default max |g|).
    """
    def measure(x, g):
        return float(np.max(np.abs(g))) if residual is None else float(residual(x, g))

    x = np.array(x0, dtype=float)
    g = gradient(x)
    res = measure(x, g)
    hist = [res]
    last_step = 0.0
    for it in range(max_iter + 1):
        if reparametrize is not None:
            x_new = reparametrize(x)
            if x_new is not x:
                x = x_new
                g = gradient(x)
                res = measure(x, g)
        if res <= tol:
            return SolveResult(x, it, res, hist)
        hess = hessian(x)
        if noise_scale is None:
            scale = np.full(len(x), max(1.0, float(np.max(np.abs(x)))))
        else:
            scale = noise_scale(x)
        floor = 8.0 * EPS * float(np.max(np.abs(hess) @ scale))
        if res <= floor:
            # the gradient cannot be resolved any further in floating point
            return SolveResult(x, it, res, hist)
        if it == max_iter:
            break
        try:
            d = _scaled_solve(hess, g)
        except np.linalg.LinAlgError:
            # the Hessian degenerated, which happens only when iterates run off to infinity
            raise BoundaryContact(x, res) from None
        norm0 = float(np.linalg.norm(g))
        alpha = 1.0
        for _ in range(MAX_HALVINGS):
            trial = x + alpha * d
            ok = feasible is None or feasible(trial)
            if ok:
                try:
                    g_trial = gradient(trial)
                except (DomainError, OverflowError, FloatingPointError):
                    ok = False
            if ok and np.all(np.isfinite(g_trial)):
                if np.linalg.norm(g_trial) < (1.0 - 1e-4 * alpha) * norm0:
                    break
                if increase is not None and increase(x, trial) >= 1e-4 * alpha * float(g @ d):
                    break
            alpha *= 0.5
        else:
            if res <= 1e3 * tol:
                # rounding floor reached before the requested tolerance
                return SolveResult(x, it, res, hist)
            raise BoundaryContact(x, res)
        x, g = trial, g_trial
        last_step = float(np.max(np.abs(alpha * d)))
        res = measure(x, g)
        hist.append(res)
    raise ConvergenceError(
        f"Newton iteration did not converge in {max_iter} steps (residual {res:.3g})",
        iterations=max_iter,
        residual=res,
        last_step=last_step,
    )


def _scaled_solve(hess, g):
    """Newton direction -H^{-1} g, with symmetric diagonal scaling for badly scaled H."""
    dg = np.sqrt(np.abs(np.diag(hess)))
    dg[~(dg > 0.0)] = 1.0
    d = -np.linalg.solve(hess / np.outer(dg, dg), g / dg) / dg
    if not np.all(np.isfinite(d)):
        raise np.linalg.LinAlgError("non-finite Newton direction")
    return d


def rk4_step(f, y, dt):
    k1 = f(y)
    k2 = f(y + 0.5 * dt * k1)
    k3 = f(y + 0.5 * dt * k2)
    k4 = f(y + dt * k3)
    return y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
