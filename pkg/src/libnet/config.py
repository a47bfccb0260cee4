"""Scenario files: flat ``key = value`` text with unit-tagged angles.

Example::

    dimension = 1
    h_m = 10
    theta_h = 60deg
    theta_f = 45deg
    lambda = 0.01
    z_m = 0
    omega = 0
    trials = 1000
    seed = 1
    mode = support_sampling
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

from .channel import UNBOUNDED_FOV, LambertianChannel, fov_radius

SUPPORT_SAMPLING = "support_sampling"
FULL_REGION_FILTERING = "full_region_filtering"
MODES = (SUPPORT_SAMPLING, FULL_REGION_FILTERING)

KEYS = ("dimension", "h_m", "theta_h", "theta_f", "lambda", "z_m", "omega",
        "trials", "seed", "mode", "sweep_param", "sweep_start", "sweep_stop", "sweep_steps")
REQUIRED = KEYS[:9]
SWEEP_KEYS = KEYS[10:]
SWEEPABLE = {"lambda": "lam", "z_m": "z", "theta_f": "theta_f", "theta_h": "theta_h", "h_m": "h"}
ANGLE_PARAMS = ("theta_h", "theta_f")

_SECTION = "scenario"


class ConfigError(ValueError):
    """Schema or invariant violation; the message names the field or rule."""


def parse_angle(text: str, key: str) -> float:
    """``"60deg"`` / ``"1.0472rad"`` -> radians. A unit suffix is mandatory."""
    s = str(text).strip().lower()
    for suffix, conv in (("deg", math.radians), ("rad", float)):
        if s.endswith(suffix):
            try:
                return conv(float(s[: -len(suffix)]))
            except ValueError:
                break
    raise ConfigError(f"{key}: expected a number with 'deg' or 'rad' suffix, got {text!r}")


def format_angle(rad: float) -> str:
    return f"{rad!r}rad"


@dataclass(frozen=True)
class Sweep:
    param: str
    start: float
    stop: float
    steps: int

    def values(self) -> list[float]:
        if self.steps == 1:
            return [self.start]
        step = (self.stop - self.start) / (self.steps - 1)
        vals = [self.start + i * step for i in range(self.steps)]
        vals[-1] = self.stop
        return vals


@dataclass(frozen=True)
class ScenarioConfig:
    """Full experiment description. Angles are stored in radians."""

    dimension: int
    h: float
    theta_h: float
    theta_f: float
    lam: float
    z: float
    omega: float
    trials: int
    seed: int
    mode: str = SUPPORT_SAMPLING
    sweep: Sweep | None = None
    channel: LambertianChannel = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.dimension not in (1, 2):
            raise ConfigError(f"dimension: must be 1 or 2, got {self.dimension!r}")
        if not (math.isfinite(self.h) and self.h > 0):
            raise ConfigError("h_m: balloon height must be > 0")
        if not (0 < self.theta_h < math.pi / 2):
            raise ConfigError("theta_h: half-power semi-angle out of range (0, 90deg)")
        if not (0 < self.theta_f <= UNBOUNDED_FOV):
            raise ConfigError("theta_f: fov out of range (0, 90deg]")
        if not (math.isfinite(self.lam) and self.lam >= 0):
            raise ConfigError("lambda: intensity must be >= 0")
        if not (math.isfinite(self.z) and self.z >= 0):
            raise ConfigError("z_m: offset must be >= 0")
        if not (math.isfinite(self.omega) and self.omega >= 0):
            raise ConfigError("omega: noise power must be >= 0")
        if self.trials < 1:
            raise ConfigError("trials: must be >= 1")
        if self.mode not in MODES:
            raise ConfigError(f"mode: must be one of {', '.join(MODES)}, got {self.mode!r}")
        if self.sweep is not None:
            if self.sweep.param not in SWEEPABLE:
                raise ConfigError(f"sweep_param: must be one of {', '.join(SWEEPABLE)}, got {self.sweep.param!r}")
            if self.sweep.steps < 1:
                raise ConfigError("sweep_steps: must be >= 1")
        object.__setattr__(self, "channel", LambertianChannel(self.theta_h, self.h))

    @property
    def m(self) -> float:
        return self.channel.m

    @property
    def beta(self) -> float:
        return self.channel.beta

    @property
    def fov_radius(self) -> float:
        return fov_radius(self.h, self.theta_f)

    @property
    def empty_support(self) -> bool:
        """True when ``z`` lies beyond the FOV radius (no visible interferer)."""
        return self.z > self.fov_radius

    def with_param(self, name: str, value: float) -> "ScenarioConfig":
        """Copy with one sweepable parameter (config key name) replaced."""
        return replace(self, sweep=None, **{SWEEPABLE[name]: value})

    def describe(self) -> str:
        deg = math.degrees
        return (f"dimension={self.dimension} h={self.h:g} m  "
                f"theta_h={self.theta_h:.6g} rad ({deg(self.theta_h):.6g} deg)  "
                f"theta_f={self.theta_f:.6g} rad ({deg(self.theta_f):.6g} deg)  "
                f"lambda={self.lam:g} z={self.z:g} m omega={self.omega:g}  "
                f"m={self.m:.12g} beta={self.beta:.12g}  "
                f"trials={self.trials} seed={self.seed} mode={self.mode}")


def _number(raw: dict, key: str, kind=float):
    try:
        value = kind(raw[key])
    except ValueError:
        raise ConfigError(f"{key}: expected {kind.__name__}, got {raw[key]!r}") from None
    return value


def parse_config(text: str) -> ScenarioConfig:
    cp = configparser.ConfigParser(interpolation=None, delimiters=("=",), comment_prefixes=("#", ";"))
    cp.optionxform = str
    try:
        cp.read_string(f"[{_SECTION}]\n" + text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    raw = dict(cp[_SECTION])
    unknown = sorted(set(raw) - set(KEYS))
    if unknown:
        raise ConfigError(f"unknown key(s): {', '.join(unknown)}")
    missing = [k for k in REQUIRED if k not in raw]
    if missing:
        raise ConfigError(f"missing key(s): {', '.join(missing)}")

    sweep = None
    present = [k for k in SWEEP_KEYS if k in raw]
    if present:
        if len(present) != len(SWEEP_KEYS):
            absent = [k for k in SWEEP_KEYS if k not in raw]
            raise ConfigError(f"incomplete sweep, missing {', '.join(absent)}")
        param = raw["sweep_param"].strip()
        if param in ANGLE_PARAMS:
            start = parse_angle(raw["sweep_start"], "sweep_start")
            stop = parse_angle(raw["sweep_stop"], "sweep_stop")
        else:
            start = _number(raw, "sweep_start")
            stop = _number(raw, "sweep_stop")
        sweep = Sweep(param, start, stop, _number(raw, "sweep_steps", int))

    return ScenarioConfig(
        dimension=_number(raw, "dimension", int),
        h=_number(raw, "h_m"),
        theta_h=parse_angle(raw["theta_h"], "theta_h"),
        theta_f=parse_angle(raw["theta_f"], "theta_f"),
        lam=_number(raw, "lambda"),
        z=_number(raw, "z_m"),
        omega=_number(raw, "omega"),
        trials=_number(raw, "trials", int),
        seed=_number(raw, "seed", int),
        mode=raw.get("mode", SUPPORT_SAMPLING).strip(),
        sweep=sweep,
    )


def load_config(path) -> ScenarioConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config(text)


def dump_config(cfg: ScenarioConfig) -> str:
    lines = [
        f"dimension = {cfg.dimension}",
        f"h_m = {cfg.h!r}",
        f"theta_h = {format_angle(cfg.theta_h)}",
        f"theta_f = {format_angle(cfg.theta_f)}",
        f"lambda = {cfg.lam!r}",
        f"z_m = {cfg.z!r}",
        f"omega = {cfg.omega!r}",
        f"trials = {cfg.trials}",
        f"seed = {cfg.seed}",
        f"mode = {cfg.mode}",
    ]
    if cfg.sweep is not None:
        s = cfg.sweep
        fmt = format_angle if s.param in ANGLE_PARAMS else repr
        lines += [f"sweep_param = {s.param}", f"sweep_start = {fmt(s.start)}",
                  f"sweep_stop = {fmt(s.stop)}", f"sweep_steps = {s.steps}"]
    return "\n".join(lines) + "\n"


def write_config(cfg: ScenarioConfig, path) -> None:
    Path(path).write_text(dump_config(cfg))
