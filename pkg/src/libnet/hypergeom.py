"""Gauss hypergeometric function 2F1 on the non-positive real axis.

Only ``z <= 0`` is supported. Near zero the Gauss series is summed directly;
further out the Pfaff transformation

    2F1(a, b; c; z) = (1 - z)^(-a) 2F1(a, c - b; c; z / (z - 1))

moves the argument into ``[0, 1)`` first (``[1/2, 1)`` for ``z <= -1``).
Every series pass runs in double precision while tracking the magnitude of the terms; if cancellation would eat
into the requested tolerance the same series is re-summed in ``decimal`` with
enough guard digits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext

MAX_TERMS = 1_000_000
TOL_MIN, TOL_MAX = 1e-15, 1e-6
_EPS = 2.0**-52
_STREAK = 3


class Hyp2F1DomainError(ValueError):
    """Parameters or argument outside the supported domain."""


class Hyp2F1ConvergenceError(ArithmeticError):
    """Series did not meet the stopping rule within ``MAX_TERMS`` terms."""


@dataclass(frozen=True)
class Hyp2F1Params:
    a: float
    b: float
    c: float
    z: float

    def __post_init__(self):
        for name in ("a", "b", "c", "z"):
            if not math.isfinite(getattr(self, name)):
                raise Hyp2F1DomainError(f"{name} must be finite")
        if self.c <= 0 and float(self.c).is_integer():
            raise Hyp2F1DomainError(f"c = {self.c!r} is a non-positive integer")
        if self.z > 0:
            raise Hyp2F1DomainError(f"only z <= 0 is supported, got {self.z!r}")


def _series_float(a, b, c, x, tol):
    """Return ``(sum, weighted_abs_sum)`` of the Gauss series at ``|x| < 1``."""
    s = t = 1.0
    weight = 1.0
    streak = 0
    k = 0
    while True:
        ratio = (a + k) * (b + k) / ((c + k) * (k + 1)) * x
        t *= ratio
        k += 1
        s += t
        weight += (k + 1) * abs(t)
        if t == 0.0:
            return s, weight
        if abs(t) <= tol * abs(s) and abs(ratio) < 1.0:
            streak += 1
            if streak >= _STREAK:
                return s, weight
        else:
            streak = 0
        if k >= MAX_TERMS:
            raise Hyp2F1ConvergenceError(
                f"2F1({a}, {b}; {c}; {x}) series not converged after {MAX_TERMS} terms"
            )


def _series_decimal(a, b, c, x, tol, digits):
    with localcontext() as ctx:
        ctx.prec = digits
        A, B, C, X = Decimal(a), Decimal(b), Decimal(c), Decimal(x)
        dtol = Decimal(tol)
        s = t = Decimal(1)
        streak = 0
        k = 0
        while True:
            ratio = (A + k) * (B + k) / ((C + k) * (k + 1)) * X
            t *= ratio
            k += 1
            s += t
            if t == 0:
                break
            if abs(t) <= dtol * abs(s) and abs(ratio) < 1:
                streak += 1
                if streak >= _STREAK:
                    break
            else:
                streak = 0
            if k >= MAX_TERMS:
                raise Hyp2F1ConvergenceError(
                    f"2F1({a}, {b}; {c}; {x}) series not converged after {MAX_TERMS} terms"
                )
        return float(s)


def _ill_conditioned(s, weight, tol):
    return 4.0 * _EPS * weight > max(tol, 64 * _EPS) * abs(s)


def _resum(a, b, c, x, tol, s, weight):
    cond = weight / abs(s) if s != 0 else 1e300
    digits = 20 + max(0, math.ceil(math.log10(cond)))
    return _series_decimal(a, b, c, x, tol, min(digits, 400))


def _direct(a, b, c, z, tol):
    s, weight = _series_float(a, b, c, z, tol)
    if _ill_conditioned(s, weight, tol):
        return _resum(a, b, c, z, tol, s, weight), weight / max(abs(s), 1e-300)
    return s, 0.0


def _pfaff(a, b, c, z, tol):
    w = z / (z - 1.0)
    pre = (1.0 - z) ** (-a)
    s, weight = _series_float(a, c - b, c, w, tol)
    if _ill_conditioned(s, weight, tol):
        return pre * _resum(a, c - b, c, w, tol, s, weight), weight / max(abs(s), 1e-300)
    return pre * s, 0.0


def hyp2f1(a: float, b: float, c: float, z: float, tol: float = 1e-15, method: str = "auto") -> float:
    """Evaluate ``2F1(a, b; c; z)`` for real ``z <= 0`` to relative tolerance ``tol``.

    ``method`` selects the route: ``"direct"`` (Gauss series, needs
    ``-1 < z <= 0``), ``"pfaff"`` (series after the Pfaff transformation, any
    ``z <= 0``) or ``"auto"``. Auto sums the direct series on ``[-1/2, 0]``,
    where it converges at least geometrically with ratio 1/2, and switches to
    Pfaff (transformed argument in ``(1/3, 1)``) below that or whenever the
    direct terms would cancel badly.
    """
    p = Hyp2F1Params(a, b, c, z)
    if not (TOL_MIN <= tol <= TOL_MAX):
        raise Hyp2F1DomainError(f"tol must lie in [{TOL_MIN}, {TOL_MAX}], got {tol!r}")
    if p.z == 0.0 or p.a == 0.0 or p.b == 0.0:
        return 1.0
    if method == "direct":
        if p.z <= -1.0:
            raise Hyp2F1DomainError("direct Gauss series diverges for z <= -1")
        return _direct(p.a, p.b, p.c, p.z, tol)[0]
    if method == "pfaff":
        return _pfaff(p.a, p.b, p.c, p.z, tol)[0]
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")
    if p.z < -0.5:
        return _pfaff(p.a, p.b, p.c, p.z, tol)[0]
    s, weight = _series_float(p.a, p.b, p.c, p.z, tol)
    if not _ill_conditioned(s, weight, tol):
        return s
    alt, alt_cond = _pfaff(p.a, p.b, p.c, p.z, tol)
    if alt_cond == 0.0:
        return alt
    if weight / max(abs(s), 1e-300) < alt_cond:
        return _resum(p.a, p.b, p.c, p.z, tol, s, weight)
    return alt
