"""Optical downlink channel for a balloon attocell network.

Distances handed to this module are horizontal (ground-projected) distances
between the receiver and an emitter hovering at height ``h``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

UNBOUNDED_FOV = math.pi / 2


def lambertian_order(theta_h: float) -> float:
    """Lambertian emission order ``m = -ln 2 / ln cos(theta_h)``.

    Raises ``ValueError`` unless ``0 < theta_h < pi/2``.
    """
    if not (0.0 < theta_h < math.pi / 2):
        raise ValueError(f"half-power semi-angle must lie in (0, pi/2), got {theta_h!r}")
    c = math.cos(theta_h)
    if not (0.0 < c < 1.0):
        raise ValueError(f"cos(theta_h) = {c!r} leaves the Lambertian order undefined")
    return -math.log(2.0) / math.log(c)


def fov_radius(h: float, fov: float) -> float:
    """Horizontal radius seen by a receiver with half-angle ``fov`` (inf at pi/2)."""
    _check_fov(fov)
    if fov >= UNBOUNDED_FOV:
        return math.inf
    return h * math.tan(fov)


def _check_fov(fov: float) -> None:
    if not (0.0 < fov <= UNBOUNDED_FOV):
        raise ValueError(f"fov out of range (0, pi/2]: {fov!r}")


def fov_gate(horizontal_distance, h: float, fov: float):
    """Field-of-view indicator: 1 when ``|d| <= h tan(fov)`` (inclusive), else 0.

    Accepts scalars or arrays; arrays come back as ``float`` arrays of 0/1.
    """
    if h <= 0:
        raise ValueError("height must be positive")
    radius = fov_radius(h, fov)
    d = np.abs(horizontal_distance)
    if np.ndim(d) == 0:
        return 1 if d <= radius else 0
    return (d <= radius).astype(float)


@dataclass(frozen=True)
class LambertianChannel:
    """Emitter optics plus mounting height.

    ``m`` and ``beta = m + 3`` are derived from ``theta_h`` at construction.
    """

    theta_h: float
    h: float
    m: float = field(init=False)
    beta: float = field(init=False)

    def __post_init__(self):
        if not self.h > 0:
            raise ValueError(f"balloon height must be positive, got {self.h!r}")
        m = lambertian_order(self.theta_h)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "beta", m + 3.0)

    def gain(self, horizontal_distance):
        return path_gain(horizontal_distance, self)


def path_gain(horizontal_distance, channel: LambertianChannel):
    """Received gain ``(d^2 + h^2)^(-beta)``; vectorised over ``d``."""
    d = np.asarray(horizontal_distance, dtype=float)
    g = (d * d + channel.h * channel.h) ** (-channel.beta)
    return float(g) if g.ndim == 0 else g


@dataclass(frozen=True)
class Receiver:
    """Photodiode: FOV half-angle, offset ``z`` from the tagged balloon, noise power."""

    fov: float
    offset_z: float = 0.0
    noise_omega: float = 0.0

    def __post_init__(self):
        _check_fov(self.fov)
        if self.offset_z < 0:
            raise ValueError("receiver offset z must be >= 0")
        if self.noise_omega < 0:
            raise ValueError("noise power must be >= 0")

    def fov_radius(self, h: float) -> float:
        return fov_radius(h, self.fov)


def sinr_from_terms(signal, interference, omega: float):
    """Quotient ``signal / (interference + omega)`` with the degenerate cases pinned.

    A zero denominator gives ``inf`` when the signal is positive and ``nan``
    (undefined, 0/0) when it is not.
    """
    signal = np.asarray(signal, dtype=float)
    denom = np.asarray(interference, dtype=float) + omega
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(denom > 0, signal / np.where(denom > 0, denom, 1.0),
                       np.where(signal > 0, np.inf, np.nan))
    return float(out) if out.ndim == 0 else out


def _distances(points: np.ndarray) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        return np.abs(pts)
    return np.hypot(pts[:, 0], pts[:, 1])


def sinr(field, channel: LambertianChannel, rx: Receiver) -> float:
    """Instantaneous SINR at a receiver ``rx.offset_z`` away from its tagged balloon.

    ``field`` is either a ``PointField`` or a bare array of receiver-anchored
    interferer positions (shape ``(n,)`` in 1D, ``(n, 2)`` in 2D). The tagged
    balloon is not part of the field.

    Returns ``math.inf`` when nothing interferes and ``omega == 0``.
    """
    radius = rx.fov_radius(channel.h)
    if rx.offset_z > radius:
        raise ValueError(
            f"receiver offset {rx.offset_z!r} exceeds FOV radius {radius!r}: tagged balloon not visible"
        )
    points = getattr(field, "points", field)
    d = _distances(points)
    signal = path_gain(rx.offset_z, channel) * fov_gate(rx.offset_z, channel.h, rx.fov)
    if d.size:
        interference = math.fsum(path_gain(d, channel) * fov_gate(d, channel.h, rx.fov))
    else:
        interference = 0.0
    return sinr_from_terms(signal, interference, rx.noise_omega)
