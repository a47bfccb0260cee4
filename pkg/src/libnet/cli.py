"""``libnet`` command line: validate, sweep, sinr, sample-dump.

Exit codes: 0 success, 2 usage or config error, 3 validation (math) failure,
4 statistical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from dataclasses import replace

from . import analytic, montecarlo
from .config import ConfigError, FULL_REGION_FILTERING, ScenarioConfig, load_config
from .sampler import SamplerCapError, sample_ppp

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_MATH = 3
EXIT_STAT = 4

CLOSED_VS_QUAD_RTOL = 1e-8
MIN_STAT_TRIALS = 100
DEFAULT_THRESHOLDS = ()


class UsageError(Exception):
    pass


def _g(x) -> str:
    return f"{x:.17g}"


def _rel(a: float, b: float) -> float:
    if a == b:
        return 0.0
    return abs(a - b) / abs(b) if b != 0 else math.inf


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_g(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _emit(text: str, out) -> None:
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _inputs(sc: ScenarioConfig) -> analytic.MeanInterferenceInputs:
    return analytic.MeanInterferenceInputs(sc.lam, sc.h, sc.z, sc.theta_f, sc.beta)


def _quadrature_reference(sc: ScenarioConfig, two_sided: bool) -> float:
    q = analytic.mean_interference_quadrature(_inputs(sc), sc.dimension)
    return 2 * q if two_sided else q


def _load(args) -> ScenarioConfig:
    sc = load_config(args.config)
    kw = {}
    if args.seed_override is not None:
        kw["seed"] = args.seed_override
    if args.trials_override is not None:
        kw["trials"] = args.trials_override
    return replace(sc, **kw) if kw else sc


def _warn(msg: str) -> None:
    print(f"warning: {msg}", file=sys.stderr)


def _header(sc: ScenarioConfig) -> None:
    print(sc.describe())
    if sc.empty_support:
        _warn(f"z = {sc.z:g} m exceeds FOV radius {sc.fov_radius:g} m: empty interference support")


def cmd_validate(sc: ScenarioConfig, out=None, workers: int = 1) -> int:
    """Closed form vs quadrature vs Monte Carlo for the configured scenario."""
    if sc.trials < MIN_STAT_TRIALS:
        raise UsageError(f"validate needs trials >= {MIN_STAT_TRIALS}, got {sc.trials}")
    _header(sc)
    mc = montecarlo.McConfig.from_scenario(sc, workers=workers)
    two_sided = sc.dimension == 1 and sc.mode == FULL_REGION_FILTERING
    closed, tail = montecarlo.analytic_reference(mc)
    quad = _quadrature_reference(sc, two_sided)
    emp = montecarlo.empirical_mean_interference(mc)
    verdict = montecarlo.compare(closed, emp, tail)
    rel_quad = _rel(quad, closed)
    math_ok = rel_quad <= CLOSED_VS_QUAD_RTOL

    rows = [
        ("closed_form", closed, 0.0, closed, closed, 0.0, 0.0, "reference"),
        ("quadrature", quad, 0.0, quad, quad, rel_quad, 0.0, "pass" if math_ok else "fail"),
        ("monte_carlo", emp.mean, emp.std_error, emp.ci95[0], emp.ci95[1], _rel(emp.mean, closed),
         verdict.z_score, "pass" if verdict.passed else "fail"),
    ]
    header = ["method", "mean_interference", "std_error", "ci_lo", "ci_hi", "rel_error", "z_score", "verdict"]
    _emit(_csv_text(header, rows), out)
    if out:
        print(f"{'method':<12} {'value':>24} {'rel_error':>10} {'z':>7}  verdict")
        for r in rows:
            print(f"{r[0]:<12} {r[1]:>24.17g} {r[5]:>10.2e} {r[6]:>7.3f}  {r[7]}")
    if mc.truncated:
        print(f"note: unbounded FOV truncated at r_max = {mc.effective_radius:.6g} m, tail allowance {tail:.3e}")
    if not math_ok:
        print(f"FAIL closed_form vs quadrature: rel error {rel_quad:.3e} > {CLOSED_VS_QUAD_RTOL:g}", file=sys.stderr)
        return EXIT_MATH
    if not verdict.passed:
        print(f"FAIL closed_form vs monte_carlo: z = {verdict.z_score:.3f}", file=sys.stderr)
        return EXIT_STAT
    return EXIT_OK


_MONOTONE = {"lambda": 1, "theta_f": 1, "z_m": -1}


def cmd_sweep(sc: ScenarioConfig, out=None, workers: int = 1) -> int:
    """One row per sweep point: analytic vs empirical mean interference."""
    if sc.sweep is None:
        raise UsageError("sweep command needs sweep_param/sweep_start/sweep_stop/sweep_steps in the config")
    if sc.trials < MIN_STAT_TRIALS:
        raise UsageError(f"sweep needs trials >= {MIN_STAT_TRIALS}, got {sc.trials}")
    _header(sc)
    rows = []
    failures = 0
    for i, value in enumerate(sc.sweep.values()):
        try:
            point = sc.with_param(sc.sweep.param, value)
        except ConfigError as exc:
            raise ConfigError(f"sweep row {i} ({sc.sweep.param}={value!r}): {exc}") from None
        mc = montecarlo.McConfig.from_scenario(point, workers=workers)
        closed, tail = montecarlo.analytic_reference(mc)
        emp = montecarlo.empirical_mean_interference(mc)
        verdict = montecarlo.compare(closed, emp, tail)
        failures += not verdict.passed
        rows.append((value, closed, emp.mean, emp.ci95[0], emp.ci95[1], _rel(emp.mean, closed), verdict.z_score))
    header = [sc.sweep.param, "analytic", "empirical", "ci_lo", "ci_hi", "rel_error", "z_score"]
    _emit(_csv_text(header, rows), out)

    direction = _MONOTONE.get(sc.sweep.param)
    if direction is not None:
        col = [r[1] for r in rows]
        steps = [direction * (b - a) for a, b in zip(col, col[1:])]
        if sc.sweep.stop < sc.sweep.start:
            steps = [-s for s in steps]
        bad = [i + 1 for i, s in enumerate(steps) if s < -1e-12 * max(abs(c) for c in col)]
        if bad:
            print(f"FAIL analytic column not monotone in {sc.sweep.param} at rows {bad}", file=sys.stderr)
            return EXIT_MATH
    if failures:
        print(f"{failures} of {len(rows)} sweep points outside 3 sigma", file=sys.stderr)
        return EXIT_STAT
    return EXIT_OK


def cmd_sinr(sc: ScenarioConfig, thresholds, out=None, samples_out=None, workers: int = 1) -> int:
    """Coverage ``P(gamma > T)`` per threshold plus summary comment lines."""
    if sc.z > sc.fov_radius:
        raise ConfigError(f"z_m: receiver offset {sc.z:g} exceeds FOV radius {sc.fov_radius:g} (tagged balloon not visible)")
    _header(sc)
    mc = montecarlo.McConfig.from_scenario(sc, workers=workers)
    summary = montecarlo.sinr_samples(mc, thresholds, allow_infinite=True)
    closed, tail = montecarlo.analytic_reference(mc)
    denom = summary.denominator() if summary.infinite_count == 0 else None

    lines = [_csv_text(["threshold", "coverage"], zip(summary.thresholds, summary.coverage))]
    lines.append(f"# mean_finite_gamma={_g(summary.mean_finite)}\n")
    lines.append(f"# infinite_fraction={_g(summary.infinite_fraction)}\n")
    lines.append(f"# signal={_g(summary.signal)}\n")
    status = EXIT_OK
    if denom is not None:
        verdict = montecarlo.compare(sc.omega + closed, denom, tail)
        lines.append(f"# denominator_mean={_g(denom.mean)} expected={_g(sc.omega + closed)} "
                     f"z={_g(verdict.z_score)} verdict={'pass' if verdict.passed else 'fail'}\n")
        if not verdict.passed:
            status = EXIT_STAT
    _emit("".join(lines), out)
    if samples_out:
        montecarlo.write_samples_csv(samples_out, summary.interference, summary.gamma)
    return status


def cmd_sample_dump(sc: ScenarioConfig, index: int = 0, out=None) -> int:
    mc = montecarlo.McConfig.from_scenario(sc)
    region = montecarlo.sampling_region(mc)
    if region is None:
        _emit("x\n" if sc.dimension == 1 else "x,y\n", out)
        return EXIT_OK
    field = sample_ppp(region, sc.lam, sc.seed, index)
    _emit(field.to_csv(), out)
    return EXIT_OK


def _thresholds(text: str):
    if text is None or not text.strip():
        return DEFAULT_THRESHOLDS
    try:
        return tuple(float(t) for t in text.split(","))
    except ValueError:
        raise UsageError(f"--thresholds must be a comma-separated list of numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="scenario file (key = value)")
    common.add_argument("--out", help="output CSV path (default: stdout)")
    common.add_argument("--seed-override", type=int)
    common.add_argument("--trials-override", type=int)
    common.add_argument("--workers", type=int, default=1, help="Monte Carlo worker threads")

    p = argparse.ArgumentParser(prog="libnet", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[common], help="closed form vs quadrature vs Monte Carlo")
    sub.add_parser("sweep", parents=[common], help="sweep one parameter, analytic vs empirical")
    s = sub.add_parser("sinr", parents=[common], help="SINR coverage curve")
    s.add_argument("--thresholds", help="comma-separated SINR thresholds")
    s.add_argument("--samples-out", help="write raw per-trial trial,I,gamma CSV")
    d = sub.add_parser("sample-dump", parents=[common], help="write one PPP realization as CSV")
    d.add_argument("--index", type=int, default=0, help="realization index")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        sc = _load(args)
        if args.workers < 1:
            raise UsageError("--workers must be >= 1")
        if args.command == "validate":
            return cmd_validate(sc, args.out, args.workers)
        if args.command == "sweep":
            return cmd_sweep(sc, args.out, args.workers)
        if args.command == "sinr":
            return cmd_sinr(sc, _thresholds(args.thresholds), args.out, args.samples_out, args.workers)
        return cmd_sample_dump(sc, args.index, args.out)
    except (ConfigError, UsageError, SamplerCapError) as exc:
        print(f"libnet: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
