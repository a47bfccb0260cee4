"""Homogeneous Poisson point process sampling on 1D intervals and 2D regions.

Random streams
--------------
Realizations are grouped in fixed blocks of ``BLOCK_SIZE`` consecutive
indices. Block ``b`` of master seed ``s`` draws from
``PCG64(SeedSequence(s, spawn_key=(b,)))``: a 128-bit state generator keyed
by numpy's SeedSequence hash of ``(s, b)``. Inside a block the draw order is
fixed: the ``BLOCK_SIZE`` Poisson counts first, then the coordinates of all
points of the block in realization order (interval: one uniform per point;
annulus: all radius uniforms then all angle uniforms; rectangle: all x
uniforms then all y uniforms).

Realization ``i`` is therefore a pure function of ``(seed, i)``; it does not
depend on how many blocks were generated before it or on which worker
generated them.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

BLOCK_SIZE = 4096
DEFAULT_MAX_POINTS = 1e7
MAX_POINTS_ENV = "LIBNET_MAX_POINTS"


class SamplerCapError(ValueError):
    """Expected point count per realization exceeds the allocation cap."""


def max_points() -> float:
    raw = os.environ.get(MAX_POINTS_ENV)
    if raw is None:
        return DEFAULT_MAX_POINTS
    try:
        return float(raw)
    except ValueError:
        raise ValueError(f"{MAX_POINTS_ENV} must be numeric, got {raw!r}") from None


@dataclass(frozen=True)
class Region:
    """Sampling / integration region.

    ``kind`` is ``"interval"`` (bounds ``(a, b)``), ``"annulus"``
    (``(r_min, r_max)``) or ``"rectangle"`` (``(x0, x1, y0, y1)``). Upper
    bounds of intervals and annuli may be ``inf`` for integration; such regions
    cannot be sampled.
    """

    kind: str
    bounds: tuple

    def __post_init__(self):
        b = tuple(float(v) for v in self.bounds)
        object.__setattr__(self, "bounds", b)
        if any(math.isnan(v) for v in b):
            raise ValueError("region bounds must not be NaN")
        if self.kind == "interval":
            if len(b) != 2 or not b[0] < b[1]:
                raise ValueError(f"interval needs a < b, got {b}")
        elif self.kind == "annulus":
            if len(b) != 2 or not (0.0 <= b[0] < b[1]):
                raise ValueError(f"annulus needs 0 <= r_min < r_max, got {b}")
        elif self.kind == "rectangle":
            if len(b) != 4 or not (b[0] < b[1] and b[2] < b[3]):
                raise ValueError(f"rectangle needs x0 < x1 and y0 < y1, got {b}")
            if not all(math.isfinite(v) for v in b):
                raise ValueError("rectangle bounds must be finite")
        else:
            raise ValueError(f"unknown region kind {self.kind!r}")

    @classmethod
    def interval(cls, a, b):
        return cls("interval", (a, b))

    @classmethod
    def annulus(cls, r_min, r_max):
        return cls("annulus", (r_min, r_max))

    @classmethod
    def rectangle(cls, x0, x1, y0, y1):
        return cls("rectangle", (x0, x1, y0, y1))

    @property
    def dimension(self) -> int:
        return 1 if self.kind == "interval" else 2

    @property
    def measure(self) -> float:
        b = self.bounds
        if self.kind == "interval":
            return b[1] - b[0]
        if self.kind == "annulus":
            return math.pi * (b[1] - b[0]) * (b[1] + b[0])
        return (b[1] - b[0]) * (b[3] - b[2])

    def contains(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        b = self.bounds
        if self.kind == "interval":
            return (pts >= b[0]) & (pts <= b[1])
        if self.kind == "annulus":
            r = np.hypot(pts[:, 0], pts[:, 1])
            return (r >= b[0]) & (r <= b[1])
        return (pts[:, 0] >= b[0]) & (pts[:, 0] <= b[1]) & (pts[:, 1] >= b[2]) & (pts[:, 1] <= b[3])


@dataclass(frozen=True)
class PointField:
    """One realization: receiver-anchored coordinates, shape ``(n,)`` or ``(n, 2)``."""

    points: np.ndarray
    region: Region
    seed: int | None = None
    index: int | None = None
    dimension: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "dimension", self.region.dimension)
        pts = np.asarray(self.points, dtype=float)
        if self.dimension == 1:
            pts = pts.reshape(-1)
        else:
            pts = pts.reshape(-1, 2)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return len(self.points)

    def to_csv(self) -> str:
        header = "x" if self.dimension == 1 else "x,y"
        rows = [header]
        if self.dimension == 1:
            rows += [f"{x:.17g}" for x in self.points]
        else:
            rows += [f"{x:.17g},{y:.17g}" for x, y in self.points]
        return "\n".join(rows) + "\n"


def expected_count(region: Region, lam: float) -> float:
    return lam * region.measure


def block_generator(seed: int, block: int) -> np.random.Generator:
    """Generator for realization block ``block`` of master ``seed``."""
    ss = np.random.SeedSequence(entropy=int(seed) & (2**64 - 1), spawn_key=(int(block),))
    return np.random.Generator(np.random.PCG64(ss))


def _check_sampling(region: Region, lam: float) -> float:
    if lam < 0 or math.isnan(lam):
        raise ValueError(f"intensity must be >= 0, got {lam!r}")
    measure = region.measure
    if not math.isfinite(measure):
        raise ValueError("cannot sample a region of infinite measure")
    mu = lam * measure
    cap = max_points()
    if mu > cap:
        raise SamplerCapError(f"expected {mu:.6g} points per realization exceeds cap {cap:.6g}")
    return mu


def _coordinates(rng: np.random.Generator, region: Region, n: int) -> np.ndarray:
    b = region.bounds
    if region.kind == "interval":
        return np.clip(b[0] + (b[1] - b[0]) * rng.random(n), b[0], b[1])
    if region.kind == "annulus":
        u = rng.random(n)
        phi = 2.0 * np.pi * rng.random(n)
        r2 = b[0] * b[0] + u * (b[1] - b[0]) * (b[1] + b[0])
        r = np.clip(np.sqrt(r2), b[0], b[1])
        return np.column_stack((r * np.cos(phi), r * np.sin(phi)))
    x = np.clip(b[0] + (b[1] - b[0]) * rng.random(n), b[0], b[1])
    y = np.clip(b[2] + (b[3] - b[2]) * rng.random(n), b[2], b[3])
    return np.column_stack((x, y))


def sample_block(region: Region, lam: float, seed: int, block: int):
    """All ``BLOCK_SIZE`` realizations of one block.

    Returns ``(counts, points)``; realization ``j`` of the block owns
    ``points[offsets[j]:offsets[j + 1]]`` with ``offsets = [0, *cumsum(counts)]``.
    """
    mu = _check_sampling(region, lam)
    rng = block_generator(seed, block)
    if mu == 0:
        counts = np.zeros(BLOCK_SIZE, dtype=np.int64)
    else:
        counts = rng.poisson(mu, BLOCK_SIZE).astype(np.int64)
    pts = _coordinates(rng, region, int(counts.sum()))
    return counts, pts


def sample_block_distances(region: Region, lam: float, seed: int, block: int):
    """Like ``sample_block`` but returns squared distances from the origin.

    Consumes the stream exactly as ``sample_block`` does up to the point where
    angles would be drawn (the last draw of an annulus block), so the radii
    are those of the full realizations.
    """
    mu = _check_sampling(region, lam)
    rng = block_generator(seed, block)
    if mu == 0:
        counts = np.zeros(BLOCK_SIZE, dtype=np.int64)
    else:
        counts = rng.poisson(mu, BLOCK_SIZE).astype(np.int64)
    n = int(counts.sum())
    if region.kind == "annulus":
        lo, hi = region.bounds
        r2 = lo * lo + rng.random(n) * (hi - lo) * (hi + lo)
        return counts, np.clip(r2, lo * lo, hi * hi)
    pts = _coordinates(rng, region, n)
    if pts.ndim == 1:
        return counts, pts * pts
    return counts, pts[:, 0] ** 2 + pts[:, 1] ** 2


@lru_cache(maxsize=8)
def _cached_block(region: Region, lam: float, seed: int, block: int):
    counts, pts = sample_block(region, lam, seed, block)
    offsets = np.concatenate(([0], np.cumsum(counts)))
    return offsets, pts


def sample_ppp(region: Region, lam: float, seed: int, index: int = 0) -> PointField:
    """Realization ``index`` of a homogeneous PPP of intensity ``lam`` on ``region``.

    Identical ``(region, lam, seed, index)`` always yields the same field, and
    it is the same field the Monte Carlo engine uses for trial ``index``.
    """
    if index < 0:
        raise ValueError("realization index must be >= 0")
    _check_sampling(region, lam)
    block, j = divmod(int(index), BLOCK_SIZE)
    offsets, pts = _cached_block(region, float(lam), int(seed), block)
    return PointField(pts[offsets[j]:offsets[j + 1]].copy(), region, seed=seed, index=index)
