"""Monte Carlo estimates of interference, its Laplace transform, and SINR.

Trial ``i`` uses PPP realization ``i`` of the scenario seed (see
``libnet.sampler``), so per-trial values do not depend on worker count.
Summaries are reduced with ``math.fsum``, which is exactly rounded and hence
independent of the order in which blocks finish.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import analytic
from .channel import path_gain, sinr_from_terms
from .config import FULL_REGION_FILTERING, MODES, SUPPORT_SAMPLING, ScenarioConfig
from .sampler import BLOCK_SIZE, Region, sample_block_distances

TAIL_REL = 1e-6
FULL_REGION_MARGIN = 1.25
Z_CRIT = 1.96
SIGMA_BAND = 3.0


@dataclass(frozen=True)
class McConfig:
    """``r_max`` truncates an unbounded FOV.

    Left as None it is set where the dropped tail is ``TAIL_REL`` of the mean.
    """

    scenario: ScenarioConfig
    trials: int
    seed: int
    mode: str = SUPPORT_SAMPLING
    workers: int = 1
    r_max: float | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.mode not in MODES:
            raise ValueError(f"unknown sampling mode {self.mode!r}")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")

    @classmethod
    def from_scenario(cls, sc: ScenarioConfig, **kw) -> "McConfig":
        kw.setdefault("trials", sc.trials)
        kw.setdefault("seed", sc.seed)
        kw.setdefault("mode", sc.mode)
        return cls(sc, **kw)

    @property
    def effective_radius(self) -> float:
        R = self.scenario.fov_radius
        if math.isinf(R):
            return self.r_max if self.r_max is not None else default_r_max(self.scenario)
        return R

    @property
    def truncated(self) -> bool:
        return math.isinf(self.scenario.fov_radius)


@dataclass(frozen=True)
class EmpiricalResult:
    mean: float
    std_error: float
    ci95: tuple
    trials: int
    mode: str

    @classmethod
    def from_samples(cls, x: np.ndarray, mode: str) -> "EmpiricalResult":
        n = len(x)
        mean = math.fsum(x) / n
        if n > 1:
            dev = x - mean
            var = math.fsum(dev * dev) / (n - 1)
        else:
            var = 0.0
        se = math.sqrt(var / n)
        return cls(mean, se, (mean - Z_CRIT * se, mean + Z_CRIT * se), n, mode)

    @classmethod
    def exact(cls, value: float, trials: int, mode: str) -> "EmpiricalResult":
        return cls(value, 0.0, (value, value), trials, mode)


@dataclass(frozen=True)
class Verdict:
    passed: bool
    z_score: float

    def __bool__(self):
        return self.passed


def compare(analytic_value: float, empirical: EmpiricalResult, extra_tol: float = 0.0) -> Verdict:
    """Pass iff ``|mean - analytic| <= 3 std_error (+ extra_tol)``."""
    diff = abs(empirical.mean - analytic_value)
    se = empirical.std_error
    if se > 0:
        z = diff / se
    else:
        z = 0.0 if diff == 0 else math.inf
    return Verdict(diff <= SIGMA_BAND * se + extra_tol, z)


# -- sampling geometry --------------------------------------------------------

def default_r_max(sc: ScenarioConfig, rel: float = TAIL_REL) -> float:
    """Radius beyond which the interference mean left out is at most ``rel`` of the total."""
    h, z, beta = sc.h, sc.z, sc.beta
    if sc.dimension == 2:
        # tail(r) / tail(z) = ((r^2 + h^2) / (z^2 + h^2))^(1 - beta)
        return math.sqrt((h * h + z * z) * rel ** (1.0 / (1.0 - beta)) - h * h)
    # tail(r) <= r^(1-2b) / (2b-1) against the exact tail beyond z
    inp = analytic.MeanInterferenceInputs(1.0, h, z, math.pi / 2, beta)
    total = analytic.mean_interference_1d(inp).value
    return max((rel * total * (2 * beta - 1)) ** (1.0 / (1.0 - 2 * beta)), z, h)


def sampling_region(cfg: McConfig) -> Region | None:
    """Region the PPP is drawn on, or None when nothing can be visible."""
    sc = cfg.scenario
    R = cfg.effective_radius
    if cfg.mode == SUPPORT_SAMPLING:
        if sc.z >= R:
            return None
        return Region.interval(sc.z, R) if sc.dimension == 1 else Region.annulus(sc.z, R)
    L = R if cfg.truncated else FULL_REGION_MARGIN * R
    if sc.z >= L:
        return None
    return Region.interval(-L, L) if sc.dimension == 1 else Region.annulus(0.0, L)


def analytic_reference(cfg: McConfig) -> tuple[float, float]:
    """``(closed-form mean, truncation allowance)`` matching the sampling mode.

    Full-region filtering in 1D sees both sides of the receiver, so its
    reference is twice the one-sided value; in 2D both modes share the annulus.
    """
    sc = cfg.scenario
    inp = analytic.MeanInterferenceInputs(sc.lam, sc.h, sc.z, sc.theta_f, sc.beta)
    two_sided = cfg.mode == FULL_REGION_FILTERING and sc.dimension == 1
    if sc.dimension == 1:
        value = analytic.mean_interference_1d(inp, two_sided=two_sided).value
    else:
        value = analytic.mean_interference_2d(inp).value
    tail = 0.0
    if cfg.truncated:
        tail = analytic.truncation_tail(sc.lam, sc.h, sc.beta, cfg.effective_radius, sc.dimension, two_sided)
    return value, tail


def _distances(pts: np.ndarray) -> np.ndarray:
    return np.abs(pts) if pts.ndim == 1 else np.hypot(pts[:, 0], pts[:, 1])


def _field_interference(d2: np.ndarray, cfg: McConfig) -> np.ndarray:
    """Per-point ``f(d) rho(d)`` from squared distances; full mode also drops ``d < z``."""
    sc = cfg.scenario
    g = (d2 + sc.h * sc.h) ** -sc.beta
    keep = d2 <= sc.fov_radius ** 2
    if cfg.mode == FULL_REGION_FILTERING:
        keep &= d2 >= sc.z * sc.z
    return np.where(keep, g, 0.0)


def _block_interference(cfg: McConfig, region: Region, block: int) -> np.ndarray:
    counts, d2 = sample_block_distances(region, cfg.scenario.lam, cfg.seed, block)
    g = _field_interference(d2, cfg)
    owner = np.repeat(np.arange(BLOCK_SIZE), counts)
    return np.bincount(owner, weights=g, minlength=BLOCK_SIZE)


def interference_samples(cfg: McConfig, inject=None) -> np.ndarray:
    """Per-trial interference ``I = sum f(d_i) rho(d_i)``, length ``cfg.trials``.

    ``inject`` replaces the sampler with the same fixed interferer positions
    in every trial (receiver-anchored; test hook).
    """
    if inject is not None:
        pts = np.asarray(inject, dtype=float)
        d = _distances(pts.reshape(-1) if cfg.scenario.dimension == 1 else pts.reshape(-1, 2))
        value = math.fsum(_field_interference(d * d, cfg)) if d.size else 0.0
        return np.full(cfg.trials, value)
    region = sampling_region(cfg)
    if region is None or cfg.scenario.lam == 0:
        return np.zeros(cfg.trials)
    n_blocks = -(-cfg.trials // BLOCK_SIZE)
    if cfg.workers == 1:
        parts = [_block_interference(cfg, region, b) for b in range(n_blocks)]
    else:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            parts = list(pool.map(lambda b: _block_interference(cfg, region, b), range(n_blocks)))
    return np.concatenate(parts)[: cfg.trials]


def empirical_mean_interference(cfg: McConfig, inject=None) -> EmpiricalResult:
    samples = interference_samples(cfg, inject)
    return EmpiricalResult.from_samples(samples, cfg.mode)


def laplace_from_samples(samples: np.ndarray, s_values, mode: str) -> list[EmpiricalResult]:
    out = []
    for s in s_values:
        if s < 0:
            raise ValueError("s must be >= 0")
        if s == 0:
            out.append(EmpiricalResult.exact(1.0, len(samples), mode))
        else:
            out.append(EmpiricalResult.from_samples(np.exp(-s * samples), mode))
    return out


def empirical_laplace(cfg: McConfig, s_values, inject=None) -> list[EmpiricalResult]:
    """Per-``s`` estimates of ``E[exp(-s I)]``; ``s = 0`` is exactly 1."""
    return laplace_from_samples(interference_samples(cfg, inject), s_values, cfg.mode)


@dataclass(frozen=True)
class SinrSummary:
    gamma: np.ndarray = field(repr=False)
    interference: np.ndarray = field(repr=False)
    signal: float
    thresholds: tuple
    coverage: tuple
    mean_finite: float
    infinite_count: int
    trials: int

    @property
    def infinite_fraction(self) -> float:
        return self.infinite_count / self.trials

    def denominator(self) -> EmpiricalResult:
        """``signal / gamma`` per trial, i.e. ``I + omega``."""
        return EmpiricalResult.from_samples(self.signal / self.gamma, "sinr")


def sinr_samples(cfg: McConfig, thresholds=(), *, allow_infinite: bool = False, inject=None) -> SinrSummary:
    """Per-trial SINR at the scenario receiver plus coverage ``P(gamma > T)``.

    With ``omega == 0`` an empty field gives infinite SINR; that is refused
    unless ``allow_infinite`` is set, in which case such trials count as
    covered at every threshold and are reported separately.
    """
    sc = cfg.scenario
    R = sc.fov_radius
    if sc.z > R:
        raise ValueError(f"receiver offset z={sc.z!r} exceeds FOV radius {R!r}")
    may_be_empty = inject is None or np.size(inject) == 0
    if sc.omega == 0 and may_be_empty and not allow_infinite:
        raise ValueError("omega = 0 with possibly empty fields gives infinite SINR; pass allow_infinite=True")
    interference = interference_samples(cfg, inject)
    signal = path_gain(sc.z, sc.channel)
    gamma = np.asarray(sinr_from_terms(np.full(cfg.trials, signal), interference, sc.omega))
    finite = np.isfinite(gamma)
    mean_finite = math.fsum(gamma[finite]) / finite.sum() if finite.any() else math.nan
    thresholds = tuple(float(t) for t in thresholds)
    coverage = tuple(float(np.count_nonzero(gamma > t)) / cfg.trials for t in thresholds)
    return SinrSummary(gamma, interference, signal, thresholds, coverage, mean_finite,
                       int(np.count_nonzero(np.isinf(gamma))), cfg.trials)


def write_samples_csv(path, interference, gamma=None) -> None:
    """Raw per-trial samples as ``trial,I,gamma`` (gamma column empty when absent)."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["trial", "I", "gamma"])
        for i, val in enumerate(interference):
            g = "" if gamma is None else f"{gamma[i]:.17g}"
            w.writerow([i, f"{val:.17g}", g])
