"""Per-type law tables, written out case by case.

This is a second evaluation path for triangle solving.  Each of the ten
canonical types has its own pair of solvers (angles -> lengths and
lengths -> angles) transcribed from the classical tables, sharing no code
with the uniform laws in :mod:`genhyp.trig` beyond the final container.
Other orderings of a type are handled by permuting to the canonical order.
"""
from __future__ import annotations

import itertools
import math

import numpy as np

from .errors import DomainError, InputError
from .trig import GeneralizedTriangle, check_angles, check_lengths, check_type

cos, sin, cosh, sinh, exp = math.cos, math.sin, math.cosh, math.sinh, math.exp


def _acosh(x, what):
    if not x > 1.0:
        raise DomainError(f"{what}: arccosh argument {x!r} is not above 1")
    return math.acosh(x)


def _acos(x, what):
    if not -1.0 < x < 1.0:
        raise DomainError(f"{what}: arccos argument {x!r} is outside (-1, 1)")
    return math.acos(x)


def _asinh_pos(x, what):
    if not x > 0.0:
        raise DomainError(f"{what}: sinh value {x!r} is not positive")
    return math.asinh(x)


def _log2x(x, what):
    # e^l / 2 = x
    if not x > 0.0:
        raise DomainError(f"{what}: e^l/2 = {x!r} is not positive")
    return math.log(2.0 * x)


def _sqrt(x, what):
    if not x > 0.0:
        raise DomainError(f"{what}: square of an angle is {x!r}")
    return math.sqrt(x)


def _div(a, b, what):
    if b == 0.0:
        raise DomainError(f"{what}: division by zero")
    return a / b


# (1,1,1)
def _a111(t):
    out = []
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        x = _div(cos(t[i]) + cos(t[j]) * cos(t[k]), sin(t[j]) * sin(t[k]), f"edge {i}")
        out.append(_acosh(x, f"edge {i}"))
    return out


def _l111(l):
    out = []
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        x = _div(-cosh(l[i]) + cosh(l[j]) * cosh(l[k]), sinh(l[j]) * sinh(l[k]), f"corner {i}")
        out.append(_acos(x, f"corner {i}"))
    return out


# (1,1,-1)
def _a11m(t):
    l = [0.0] * 3
    for i, j in ((0, 1), (1, 0)):
        x = _div(cos(t[i]) + cos(t[j]) * cosh(t[2]), sin(t[j]) * sinh(t[2]), f"edge {i}")
        l[i] = _asinh_pos(x, f"edge {i}")
    x = _div(cosh(t[2]) + cos(t[0]) * cos(t[1]), sin(t[0]) * sin(t[1]), "edge 2")
    l[2] = _acosh(x, "edge 2")
    return l


def _l11m(l):
    t = [0.0] * 3
    for i, j in ((0, 1), (1, 0)):
        x = _div(-sinh(l[i]) + sinh(l[j]) * cosh(l[2]), cosh(l[j]) * sinh(l[2]), f"corner {i}")
        t[i] = _acos(x, f"corner {i}")
    x = (cosh(l[2]) + sinh(l[0]) * sinh(l[1])) / (cosh(l[0]) * cosh(l[1]))
    t[2] = _acosh(x, "corner 2")
    return t


# (-1,-1,1)
def _amm1(t):
    l = [0.0] * 3
    for i, j in ((0, 1), (1, 0)):
        x = _div(cosh(t[i]) + cosh(t[j]) * cos(t[2]), sinh(t[j]) * sin(t[2]), f"edge {i}")
        l[i] = _asinh_pos(x, f"edge {i}")
    x = (cos(t[2]) + cosh(t[0]) * cosh(t[1])) / (sinh(t[0]) * sinh(t[1]))
    l[2] = _acosh(x, "edge 2")
    return l


def _lmm1(l):
    t = [0.0] * 3
    for i, j in ((0, 1), (1, 0)):
        # the table prints cos here; the corner is hyperideal, so it is cosh
        x = _div(sinh(l[i]) + sinh(l[j]) * cosh(l[2]), cosh(l[j]) * sinh(l[2]), f"corner {i}")
        t[i] = _acosh(x, f"corner {i}")
    x = (-cosh(l[2]) + sinh(l[0]) * sinh(l[1])) / (cosh(l[0]) * cosh(l[1]))
    t[2] = _acos(x, "corner 2")
    return t


# (-1,-1,-1)
def _ammm(t):
    out = []
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        x = (cosh(t[i]) + cosh(t[j]) * cosh(t[k])) / (sinh(t[j]) * sinh(t[k]))
        out.append(_acosh(x, f"edge {i}"))
    return out


def _lmmm(l):
    out = []
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        x = _div(cosh(l[i]) + cosh(l[j]) * cosh(l[k]), sinh(l[j]) * sinh(l[k]), f"corner {i}")
        out.append(_acosh(x, f"corner {i}"))
    return out


# (1,1,0)
def _a110(t):
    l = [0.0] * 3
    for i, j in ((0, 1), (1, 0)):
        l[i] = _log2x(_div(cos(t[i]) + cos(t[j]), t[2] * sin(t[j]), f"edge {i}"), f"edge {i}")
    x = (1.0 + cos(t[0]) * cos(t[1])) / (sin(t[0]) * sin(t[1]))
    l[2] = _acosh(x, "edge 2")
    return l


def _l110(l):
    t = [0.0] * 3
    for i, j in ((0, 1), (1, 0)):
        x = _div(-exp(l[i]) + exp(l[j]) * cosh(l[2]), exp(l[j]) * sinh(l[2]), f"corner {i}")
        t[i] = _acos(x, f"corner {i}")
    y = (cosh(l[2]) - cosh(l[0] - l[1])) / (exp(l[0] + l[1]) / 4.0)
    t[2] = _sqrt(2.0 * y, "corner 2")
    return t


# (1,-1,0)
def _a1m0(t):
    l1 = _log2x(_div(cos(t[0]) + cosh(t[1]), t[2] * sinh(t[1]), "edge 0"), "edge 0")
    l2 = _log2x(_div(cosh(t[1]) + cos(t[0]), t[2] * sin(t[0]), "edge 1"), "edge 1")
    x = (1.0 + cos(t[0]) * cosh(t[1])) / (sin(t[0]) * sinh(t[1]))
    return [l1, l2, _asinh_pos(x, "edge 2")]


def _l1m0(l):
    x1 = (-exp(l[0]) + exp(l[1]) * sinh(l[2])) / (exp(l[1]) * cosh(l[2]))
    x2 = (exp(l[1]) + exp(l[0]) * sinh(l[2])) / (exp(l[0]) * cosh(l[2]))
    y = (sinh(l[2]) + sinh(l[1] - l[0])) / (exp(l[0] + l[1]) / 4.0)
    return [_acos(x1, "corner 0"), _acosh(x2, "corner 1"), _sqrt(2.0 * y, "corner 2")]


# (-1,-1,0)
def _amm0(t):
    l = [0.0] * 3
    for i, j in ((0, 1), (1, 0)):
        l[i] = _log2x((cosh(t[i]) + cosh(t[j])) / (t[2] * sinh(t[j])), f"edge {i}")
    x = (1.0 + cosh(t[0]) * cosh(t[1])) / (sinh(t[0]) * sinh(t[1]))
    l[2] = _acosh(x, "edge 2")
    return l


def _lmm0(l):
    t = [0.0] * 3
    for i, j in ((0, 1), (1, 0)):
        x = _div(exp(l[i]) + exp(l[j]) * cosh(l[2]), exp(l[j]) * sinh(l[2]), f"corner {i}")
        t[i] = _acosh(x, f"corner {i}")
    y = (cosh(l[2]) + cosh(l[0] - l[1])) / (exp(l[0] + l[1]) / 4.0)
    t[2] = _sqrt(2.0 * y, "corner 2")
    return t


# (0,0,1)
def _a001(t):
    l = [0.0] * 3
    for i, j in ((0, 1), (1, 0)):
        l[i] = _log2x(_div(1.0 + cos(t[2]), t[j] * sin(t[2]), f"edge {i}"), f"edge {i}")
    l[2] = _log2x((1.0 + cos(t[2])) / (t[0] * t[1]), "edge 2")
    return l


def _l001(l):
    t = [0.0] * 3
    for i, j in ((0, 1), (1, 0)):
        q = (exp(l[i]) - exp(l[2] - l[j])) / exp(l[j] + l[2])
        t[i] = 2.0 * _sqrt(q, f"corner {i}")
    s2 = exp(l[2] - l[0] - l[1])
    if not 0.0 < s2 < 1.0:
        raise DomainError(f"corner 2: sin^2 of the half angle is {s2!r}")
    t[2] = 2.0 * math.asin(math.sqrt(s2))
    return t


# (0,0,-1)
def _a00m(t):
    l = [0.0] * 3
    for i, j in ((0, 1), (1, 0)):
        l[i] = _log2x((1.0 + cosh(t[2])) / (t[j] * sinh(t[2])), f"edge {i}")
    l[2] = _log2x((1.0 + cosh(t[2])) / (t[0] * t[1]), "edge 2")
    return l


def _l00m(l):
    t = [0.0] * 3
    for i, j in ((0, 1), (1, 0)):
        q = (exp(l[i]) + exp(l[2] - l[j])) / exp(l[j] + l[2])
        t[i] = 2.0 * _sqrt(q, f"corner {i}")
    t[2] = 2.0 * math.asinh(math.sqrt(exp(l[2] - l[0] - l[1])))
    return t


# (0,0,0)
def _a000(t):
    return [_log2x(2.0 / (t[j] * t[k]), f"edge {i}") for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1))]


def _l000(l):
    return [2.0 * math.sqrt(exp(l[i] - l[j] - l[k])) for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1))]


BOXES = {
    (1, 1, 1): (_a111, _l111),
    (1, 1, -1): (_a11m, _l11m),
    (-1, -1, 1): (_amm1, _lmm1),
    (-1, -1, -1): (_ammm, _lmmm),
    (1, 1, 0): (_a110, _l110),
    (1, -1, 0): (_a1m0, _l1m0),
    (-1, -1, 0): (_amm0, _lmm0),
    (0, 0, 1): (_a001, _l001),
    (0, 0, -1): (_a00m, _l00m),
    (0, 0, 0): (_a000, _l000),
}


def canonical_permutation(ttype):
    """Return ``(box, perm)`` with ``box[m] == ttype[perm[m]]`` for a tabulated ``box``."""
    ttype = check_type(ttype)
    for perm in itertools.permutations(range(3)):
        key = tuple(ttype[p] for p in perm)
        if key in BOXES:
            return key, perm
    raise InputError(f"no table entry for type {ttype}")  # unreachable for valid input


def appendix_laws(ttype, angles=None, lengths=None) -> GeneralizedTriangle:
    """Solve a triangle from angles or lengths with the per-type tables."""
    if (angles is None) == (lengths is None):
        raise InputError("give exactly one of angles or lengths")
    ttype = check_type(ttype)
    box, perm = canonical_permutation(ttype)
    from_angles, from_lengths = BOXES[box]
    if angles is not None:
        t = check_angles(ttype, angles)
        res = from_angles([float(t[p]) for p in perm])
        l = np.empty(3)
        l[list(perm)] = res
        return GeneralizedTriangle(ttype, tuple(float(x) for x in t), tuple(float(x) for x in l))
    l = check_lengths(ttype, lengths)
    res = from_lengths([float(l[p]) for p in perm])
    t = np.empty(3)
    t[list(perm)] = res
    return GeneralizedTriangle(ttype, tuple(float(x) for x in t), tuple(float(x) for x in l))


def appendix_sine_ratios(tri: GeneralizedTriangle) -> np.ndarray:
    """Sine-law ratios in the table's own form (e.g. theta/e^l for ideal pairs)."""
    box, perm = canonical_permutation(tri.ttype)
    t = [tri.angles[p] for p in perm]
    l = [tri.lengths[p] for p in perm]
    num = [sin(x) if e == 1 else (sinh(x) if e == -1 else x) for e, x in zip(box, t)]
    den = []
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        s = box[j] * box[k]
        if s == 1:
            den.append(sinh(l[i]))
        elif s == -1:
            den.append(cosh(l[i]))
        else:
            # the tables use both e^l/2 and e^l for ideal pairs; the factor is common
            den.append(exp(l[i]) / 2.0)
    r = np.empty(3)
    r[list(perm)] = np.array(num) / np.array(den)
    return r
