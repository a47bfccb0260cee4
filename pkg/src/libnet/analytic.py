"""Mean co-channel interference: closed forms, quadrature, Laplace functional.

Kernels are functions of horizontal receiver-emitter distance. The mean of a
sum over a homogeneous PPP is the intensity-weighted integral of the kernel
over the visible support, which is what ``campbell_integral`` computes by
quadrature; the 1D and 2D closed forms below are checked against it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from scipy import integrate

from .channel import UNBOUNDED_FOV, LambertianChannel, fov_radius, path_gain
from .hypergeom import hyp2f1
from .sampler import Region

QUAD_EPSABS = 0.0
QUAD_EPSREL = 1e-10
QUAD_LIMIT = 500


class QuadratureError(ArithmeticError):
    def __init__(self, message, value, abserr):
        super().__init__(f"{message} (value={value!r}, error estimate={abserr!r})")
        self.value = value
        self.abserr = abserr


@dataclass(frozen=True)
class MeanInterferenceInputs:
    lam: float
    h: float
    z: float
    theta_f: float
    beta: float

    def __post_init__(self):
        if not self.lam >= 0:
            raise ValueError("intensity must be >= 0")
        if not self.h > 0:
            raise ValueError("height must be > 0")
        if not self.z >= 0:
            raise ValueError("offset z must be >= 0")
        if not (0 < self.theta_f <= UNBOUNDED_FOV):
            raise ValueError("fov out of range (0, pi/2]")
        if not self.beta > 1:
            raise ValueError("beta must exceed 1")

    @classmethod
    def from_channel(cls, lam, channel: LambertianChannel, z, theta_f):
        return cls(lam, channel.h, z, theta_f, channel.beta)

    @property
    def radius(self) -> float:
        return fov_radius(self.h, self.theta_f)


@dataclass(frozen=True)
class AnalyticResult:
    """Closed-form value; ``empty_support`` is set when ``z`` lies beyond the FOV edge."""

    value: float
    empty_support: bool = False

    def __float__(self):
        return float(self.value)


# 1D pieces. lower(X) = int_0^X (x^2+h^2)^-beta dx, upper(X) = int_X^inf.

def _lower(X, h, beta):
    if X == 0:
        return 0.0
    return X * h ** (-2 * beta) * hyp2f1(0.5, beta, 1.5, -((X / h) ** 2))


def _upper(X, h, beta):
    if math.isinf(X):
        return 0.0
    return (X * X + h * h) ** (1 - beta) / ((2 * beta - 1) * X) * hyp2f1(1.0, 0.5, beta + 0.5, -((h / X) ** 2))


def _segment_1d(z, R, h, beta):
    # split at h: below it the lower form is well conditioned, above it the upper form
    p = min(max(h, z), R)
    total = 0.0
    if p > z:
        total += _lower(p, h, beta) - _lower(z, h, beta)
    if R > p:
        total += _upper(p, h, beta) - _upper(R, h, beta)
    return total


def mean_interference_1d(inp: MeanInterferenceInputs, *, two_sided: bool = False,
                         literal: bool = False) -> AnalyticResult:
    """Mean interference on a line of balloons, visible support ``[z, h tan theta_f]``.

    The value is ``lam * (h^(1-2b) tan(t) 2F1(1/2, b; 3/2; -tan^2 t)
    - z h^(-2b) 2F1(1/2, b; 3/2; -z^2/h^2))``. By default each difference is
    regrouped at ``x = h`` into pieces that do not cancel (``literal=True``
    evaluates the two-term expression as written). ``two_sided`` mirrors the
    support onto ``[-h tan theta_f, -z]``; that doubling is an add-on, not
    part of the one-sided model.
    """
    R = inp.radius
    if inp.z > R:
        return AnalyticResult(0.0, empty_support=True)
    if inp.lam == 0 or inp.z == R:
        return AnalyticResult(0.0)
    h, beta = inp.h, inp.beta
    if literal:
        if math.isinf(R):
            raise ValueError("literal form needs a finite FOV (tan(pi/2) diverges)")
        t = math.tan(inp.theta_f)
        val = (h ** (1 - 2 * beta) * t * hyp2f1(0.5, beta, 1.5, -t * t)
               - inp.z * h ** (-2 * beta) * hyp2f1(0.5, beta, 1.5, -((inp.z / h) ** 2)))
    else:
        val = _segment_1d(inp.z, R, h, beta)
    val = inp.lam * max(val, 0.0)
    return AnalyticResult(2 * val if two_sided else val)


def mean_interference_2d(inp: MeanInterferenceInputs, *, literal: bool = False) -> AnalyticResult:
    """Mean interference over the plane, annular support ``z <= r <= h tan theta_f``.

    ``lam * pi / (b - 1) * ((h^2 + z^2)^(1-b) - h^(2-2b) cos^(2b-2)(theta_f))``,
    evaluated as ``A * -expm1((b-1) log q)`` with ``q = (h^2+z^2) cos^2 / h^2``
    so that ``z`` close to the FOV edge does not cancel.
    """
    R = inp.radius
    if inp.z > R:
        return AnalyticResult(0.0, empty_support=True)
    if inp.lam == 0 or inp.z == R:
        return AnalyticResult(0.0)
    h, z, beta = inp.h, inp.z, inp.beta
    k = math.pi / (beta - 1)
    first = (h * h + z * z) ** (1 - beta)
    if math.isinf(R):
        return AnalyticResult(inp.lam * k * first)
    if literal:
        second = h ** (2 - 2 * beta) * math.cos(inp.theta_f) ** (2 * beta - 2)
        return AnalyticResult(inp.lam * k * max(first - second, 0.0))
    # log q = log((h^2 + z^2) / (h^2 + R^2)) with (z^2 - R^2) formed as a product
    log_q = math.log1p((z - R) * (z + R) / (h * h + R * R))
    return AnalyticResult(inp.lam * k * first * -math.expm1((beta - 1) * log_q))


def mean_interference(inp: MeanInterferenceInputs, dimension: int, **kw) -> AnalyticResult:
    if dimension == 1:
        return mean_interference_1d(inp, **kw)
    if dimension == 2:
        return mean_interference_2d(inp, **kw)
    raise ValueError(f"dimension must be 1 or 2, got {dimension!r}")


def truncation_tail(lam, h, beta, r_max, dimension, two_sided=False) -> float:
    """Exact mean interference beyond ``r_max`` (what truncating the support drops)."""
    if dimension == 2:
        return lam * math.pi * (r_max * r_max + h * h) ** (1 - beta) / (beta - 1)
    tail = lam * _upper(r_max, h, beta)
    return 2 * tail if two_sided else tail


# -- quadrature ---------------------------------------------------------------

def _quad(fn, a, b, epsabs, epsrel, points=None):
    kw = {"epsabs": epsabs, "epsrel": epsrel, "limit": QUAD_LIMIT, "full_output": 1}
    if points is not None:
        kw["points"] = points
    out = integrate.quad(fn, a, b, **kw)
    value, abserr = out[0], out[1]
    if len(out) == 4 and abserr > max(epsabs, 10 * epsrel * abs(value)):
        raise QuadratureError(out[3].splitlines()[0], value, abserr)
    return value, abserr


def _as_fn(lam):
    if callable(lam):
        return lam
    lam = float(lam)
    return lambda *_: lam


def campbell_integral(lambda_fn, f_kernel: Callable[[float], float], support: Region, *,
                      scale: float = 1.0, epsabs: float = QUAD_EPSABS,
                      epsrel: float = QUAD_EPSREL) -> float:
    """Adaptive quadrature of ``int_S lambda(x) f(|x|) dx``.

    ``lambda_fn`` is a constant or a callable: of ``x`` on an interval, of the
    radius on an annulus (radially symmetric, integrated in polar form), of
    ``(x, y)`` on a rectangle. ``f_kernel`` takes a horizontal distance.

    Infinite upper limits are mapped onto ``v = 1 / (r^2 + scale^2)``, which
    turns power-law kernels with ``scale = h`` into proper integrals.
    Raises ``QuadratureError`` when quad cannot meet its target.
    """
    if not callable(lambda_fn) and float(lambda_fn) == 0.0:
        return 0.0
    lam = _as_fn(lambda_fn)
    c2 = scale * scale
    b = support.bounds

    if support.kind == "rectangle":
        val, err = integrate.dblquad(lambda y, x: lam(x, y) * f_kernel(math.hypot(x, y)),
                                     b[0], b[1], b[2], b[3], epsabs=epsabs, epsrel=epsrel)
        return val

    if support.kind == "interval":
        lo, hi = b
        if lo < 0:
            if math.isinf(hi) or math.isinf(lo):
                raise ValueError("two-sided infinite intervals are not supported")
            inner = [0.0] if lo < 0 < hi else None
            return _quad(lambda x: lam(x) * f_kernel(abs(x)), lo, hi, epsabs, epsrel, inner)[0]
        if math.isfinite(hi):
            return _quad(lambda x: lam(x) * f_kernel(x), lo, hi, epsabs, epsrel)[0]
        split = max(lo, scale)
        head = _quad(lambda x: lam(x) * f_kernel(x), lo, split, epsabs, epsrel)[0] if split > lo else 0.0

        def tail(v):
            x = math.sqrt(1.0 / v - c2)
            return lam(x) * f_kernel(x) / (2.0 * v * v * x)

        return head + _quad(tail, 0.0, 1.0 / (split * split + c2), epsabs, epsrel)[0]

    r_min, r_max = b
    if math.isfinite(r_max):
        return 2 * math.pi * _quad(lambda r: r * lam(r) * f_kernel(r), r_min, r_max, epsabs, epsrel)[0]

    def polar_tail(v):
        r = math.sqrt(max(1.0 / v - c2, 0.0))
        return lam(r) * f_kernel(r) / (v * v)

    return math.pi * _quad(polar_tail, 0.0, 1.0 / (r_min * r_min + c2), epsabs, epsrel)[0]


def visible_support(dimension: int, z: float, h: float, theta_f: float) -> Region | None:
    """Receiver-anchored visible support ``[z, h tan theta_f]`` (annulus in 2D); None if empty."""
    R = fov_radius(h, theta_f)
    if z >= R:
        return None
    return Region.interval(z, R) if dimension == 1 else Region.annulus(z, R)


def mean_interference_quadrature(inp: MeanInterferenceInputs, dimension: int) -> float:
    """Same quantity as the closed forms, by quadrature of the power-law kernel."""
    support = visible_support(dimension, inp.z, inp.h, inp.theta_f)
    if support is None:
        return 0.0
    h2, beta = inp.h * inp.h, inp.beta
    return campbell_integral(inp.lam, lambda d: (d * d + h2) ** -beta, support, scale=inp.h)


# -- Laplace functional -------------------------------------------------------

def _min_distance(support: Region) -> float:
    b = support.bounds
    if support.kind == "interval":
        return 0.0 if b[0] <= 0 <= b[1] else min(abs(b[0]), abs(b[1]))
    if support.kind == "annulus":
        return b[0]
    return math.hypot(0.0 if b[0] <= 0 <= b[1] else min(abs(b[0]), abs(b[1])),
                      0.0 if b[2] <= 0 <= b[3] else min(abs(b[2]), abs(b[3])))


def laplace_exponent(s: float, lam: float, channel: LambertianChannel, support: Region | None) -> float:
    """``lam * int_S (1 - exp(-s f))``; also defined for negative ``s``."""
    if s == 0 or lam == 0 or support is None:
        return 0.0
    h2, beta = channel.h * channel.h, channel.beta
    return campbell_integral(lam, lambda d: -math.expm1(-s * (d * d + h2) ** -beta), support, scale=channel.h)


def laplace_functional(s: float, lam: float, channel: LambertianChannel, support: Region | None) -> float:
    """``E[exp(-s I)] = exp(-lam * int_S (1 - exp(-s f(x))) dx)``, in ``(0, 1]``."""
    if s < 0:
        raise ValueError("transform variable s must be >= 0")
    return math.exp(-laplace_exponent(s, lam, channel, support))


def laplace_slope_at_zero(lam: float, channel: LambertianChannel, support: Region | None,
                          rel_step: float = 1e-4) -> float:
    """``-dL/ds`` at ``s = 0`` by a central difference of the Laplace functional.

    The step is ``rel_step / (f_max + lam * int f)`` so that the cubic term of
    the expansion stays below ``rel_step**2``. ``L(-delta)`` uses the analytic
    continuation of the exponent.
    """
    if lam == 0 or support is None:
        return 0.0
    f_max = path_gain(_min_distance(support), channel)
    h2, beta = channel.h * channel.h, channel.beta
    first = lam * campbell_integral(1.0, lambda d: (d * d + h2) ** -beta, support, scale=channel.h)
    delta = rel_step / (f_max + first)
    k_plus = laplace_exponent(delta, lam, channel, support)
    k_minus = laplace_exponent(-delta, lam, channel, support)
    # L(-d) - L(d) = L(d) * expm1(K(d) - K(-d))
    return math.exp(-k_plus) * math.expm1(k_plus - k_minus) / (2 * delta)
