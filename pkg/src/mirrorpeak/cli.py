"""Command-line interface: estimate a peak from a CSV spectrum or run the precision sweeps.

Exit codes: 0 success, 2 input parse, 3 degenerate window, 4 estimator
failure, 5 config error.
"""

from __future__ import annotations

import argparse
import csv
import datetime
import math
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .bench import (
    CSV_COLUMNS,
    ExperimentSpec,
    rate_sweep_spec,
    run_grid,
    snr_sweep_spec,
    threshold_sweep_spec,
    to_row,
)
from .checks import run_selfcheck
from .errors import EstimatorError, NonUniformGridError, PeakError, TooFewSamplesError, WindowError
from .estimators import ESTIMATORS, IterationConfig, residual_s
from .selection import select_window
from .signal import SignalModel, Spectrum

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_WINDOW = 3
EXIT_ESTIMATOR = 4
EXIT_CONFIG = 5

GRID_TOLERANCE = 1e-6

CONFIG_KEYS = (
    "amplitude",
    "mu",
    "sigma",
    "x_start",
    "x_end",
    "rates",
    "sigma_n_levels",
    "threshold_multipliers",
    "trials",
    "master_seed",
    "estimators",
    "tol",
    "max_iters",
)
# written into manifests, ignored when a manifest is read back as a config
MANIFEST_ONLY_KEYS = ("command", "tool_version", "timestamp", "output")

SWEEPS = {
    "snr-sweep": snr_sweep_spec,
    "rate-sweep": rate_sweep_spec,
    "threshold-sweep": threshold_sweep_spec,
}


class ConfigError(ValueError):
    pass


class InputError(ValueError):
    pass


def read_spectrum(path) -> Spectrum:
    """Read an ``x,y`` CSV with uniformly spaced, strictly increasing positions."""
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    rows = [r for r in rows if r and any(c.strip() for c in r)]
    if not rows or [c.strip().lower() for c in rows[0]] != ["x", "y"]:
        raise InputError(f"{path}: expected header 'x,y'")
    try:
        data = np.array([[float(a), float(b)] for a, b in rows[1:]], dtype=float).reshape(-1, 2)
    except ValueError as exc:
        raise InputError(f"{path}: malformed row ({exc})") from exc
    if not np.all(np.isfinite(data)):
        raise InputError(f"{path}: non-finite values")
    if len(data) < 3:
        raise TooFewSamplesError(f"{path}: {len(data)} samples, at least 3 are needed")
    x, y = data[:, 0], data[:, 1]
    steps = np.diff(x)
    dx = (x[-1] - x[0]) / (len(x) - 1)
    if not dx > 0 or np.any(steps <= 0):
        raise NonUniformGridError(f"{path}: positions must be strictly increasing")
    if np.max(np.abs(steps - dx)) > GRID_TOLERANCE * dx:
        raise NonUniformGridError(f"{path}: non-uniform grid (spacing deviates by more than {GRID_TOLERANCE:g})")
    return Spectrum(float(x[0]), float(dx), y)


def write_spectrum(path, spectrum: Spectrum):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "y"])
        for x, y in zip(spectrum.x.tolist(), spectrum.y.tolist()):
            w.writerow([repr(x), repr(y)])


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.split(",") if v.strip())


def _rates(text: str) -> tuple[float, ...]:
    return tuple(int(v) if float(v).is_integer() else v for v in _floats(text))


def read_config(path) -> dict[str, str]:
    out = {}
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    for n, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{n}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key in MANIFEST_ONLY_KEYS:
            continue
        if key not in CONFIG_KEYS:
            raise ConfigError(f"{path}:{n}: unknown key {key!r}")
        out[key] = value
    return out


def build_spec(base: ExperimentSpec, settings: dict[str, str]) -> ExperimentSpec:
    """Apply flat ``key = value`` settings on top of ``base``."""
    try:
        m = base.model
        model = SignalModel.gaussian(
            float(settings.get("amplitude", m.amplitude)),
            float(settings.get("mu", m.mu)),
            float(settings.get("sigma", m.sigma)),
        )
        it = base.iteration
        iteration = IterationConfig(
            tol=float(settings.get("tol", it.tol)),
            max_iters=int(settings.get("max_iters", it.max_iters)),
        )
        changes = dict(model=model, iteration=iteration)
        if "x_start" in settings:
            changes["x_start"] = float(settings["x_start"])
        if "x_end" in settings:
            changes["x_end"] = float(settings["x_end"])
        if "rates" in settings:
            changes["rates"] = _rates(settings["rates"])
        if "sigma_n_levels" in settings:
            changes["sigma_n_levels"] = _floats(settings["sigma_n_levels"])
        if "threshold_multipliers" in settings:
            changes["threshold_multipliers"] = _floats(settings["threshold_multipliers"])
        if "trials" in settings:
            changes["trials"] = int(settings["trials"])
        if "master_seed" in settings:
            changes["master_seed"] = int(settings["master_seed"])
        if "estimators" in settings:
            changes["estimators"] = tuple(e.strip() for e in settings["estimators"].split(",") if e.strip())
        return replace(base, **changes)
    except (ValueError, NotImplementedError) as exc:
        raise ConfigError(str(exc)) from exc


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (tuple, list)):
        return ",".join(_fmt(v) for v in value)
    return str(value)


def spec_settings(spec: ExperimentSpec) -> dict[str, str]:
    return {
        "amplitude": _fmt(spec.model.amplitude),
        "mu": _fmt(spec.model.mu),
        "sigma": _fmt(spec.model.sigma),
        "x_start": _fmt(spec.x_start),
        "x_end": _fmt(spec.x_end),
        "rates": _fmt(spec.rates),
        "sigma_n_levels": _fmt(spec.sigma_n_levels),
        "threshold_multipliers": _fmt(spec.threshold_multipliers),
        "trials": _fmt(spec.trials),
        "master_seed": _fmt(spec.master_seed),
        "estimators": _fmt(spec.estimators),
        "tol": _fmt(spec.iteration.tol),
        "max_iters": _fmt(spec.iteration.max_iters),
    }


def write_results(path, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in rows:
            d = to_row(r)
            w.writerow([_fmt(d[c]) for c in CSV_COLUMNS])


def write_manifest(path, command: str, spec: ExperimentSpec, output):
    lines = [
        f"command = {command}",
        f"tool_version = {__version__}",
        f"timestamp = {datetime.datetime.now(datetime.timezone.utc).isoformat(timespec='seconds')}",
        f"output = {output}",
    ]
    lines += [f"{k} = {v}" for k, v in spec_settings(spec).items()]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _sweep_overrides(args) -> dict[str, str]:
    out = {}
    for flag, key in (
        ("trials", "trials"),
        ("seed", "master_seed"),
        ("rate", "rates"),
        ("sigma_n", "sigma_n_levels"),
        ("threshold_multiplier", "threshold_multipliers"),
        ("tol", "tol"),
        ("max_iters", "max_iters"),
        ("estimators", "estimators"),
    ):
        value = getattr(args, flag, None)
        if value is not None:
            out[key] = str(value)
    return out


def cmd_sweep(args) -> int:
    settings = read_config(args.config) if args.config else {}
    settings.update(_sweep_overrides(args))
    spec = build_spec(SWEEPS[args.command](), settings)
    out = Path(args.out or f"{args.command.replace('-', '_')}.csv")
    try:
        rows = run_grid(spec, workers=args.workers)
    except PeakError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ESTIMATOR
    try:
        write_results(out, rows)
        write_manifest(f"{out}.manifest", args.command, spec, out)
    except OSError as exc:
        raise ConfigError(f"cannot write {out}: {exc}") from exc

    print(f"{'estimator':<9} {'rate':>5} {'sigma_n':>8} {'snr_db':>7} {'mult':>5} {'n_ok':>6} {'bias':>11} {'std':>10} {'iters':>6}")
    for r in rows:
        print(
            f"{r.estimator:<9} {r.rate:>5g} {r.sigma_n:>8.4g} {r.snr_db:>7.2f} {r.threshold_multiplier:>5.2g} "
            f"{r.n_ok:>6d} {r.bias:>11.3e} {r.std:>10.3e} {r.mean_iterations:>6.1f}"
        )
    print(f"wrote {out} and {out}.manifest")
    return EXIT_OK


def cmd_estimate(args) -> int:
    spectrum = read_spectrum(args.input)
    if args.threshold is not None:
        threshold = args.threshold
    elif args.threshold_multiplier is not None:
        if args.sigma_n is None:
            raise ConfigError("--threshold-multiplier needs --sigma-n")
        threshold = float(args.threshold_multiplier) * float(args.sigma_n)
    else:
        threshold = 0.0
    cfg = IterationConfig(tol=args.tol, max_iters=args.max_iters)
    window = select_window(spectrum, threshold)
    est = ESTIMATORS[args.method](window, cfg)
    s, count = residual_s(window, est.x_p)
    print(f"method      {args.method}")
    print(f"window      [{window.lo}, {window.hi}] ({len(window)} samples, threshold {threshold:.6g})")
    print(f"x_p         {est.x_p!r}")
    print(f"iterations  {est.iterations}")
    print(f"converged   {est.converged}")
    print(f"oscillating {est.oscillating}")
    print(f"residual_s  {s:.6e} ({count} mirrored points)")
    return EXIT_OK


def cmd_selfcheck(args) -> int:
    results, confirmed = run_selfcheck(args.oracle_windows)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"[{status}] {r.name}" + (f": {r.detail}" if r.detail else ""))
    if results[0].passed:
        print(f"stationary point matches grid argmin (denominator {confirmed})")
    return EXIT_OK if all(r.passed for r in results) else EXIT_ESTIMATOR


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mirrorpeak", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("estimate", help="estimate the peak position of a spectrum CSV")
    e.add_argument("input", help="CSV file with header x,y")
    e.add_argument("--method", choices=sorted(ESTIMATORS), default="mim2")
    e.add_argument("--threshold", type=float, help="absolute amplitude threshold")
    e.add_argument("--threshold-multiplier", type=float, help="threshold as a multiple of --sigma-n")
    e.add_argument("--sigma-n", type=float, help="noise std, used with --threshold-multiplier")
    e.add_argument("--tol", type=float, default=IterationConfig.tol)
    e.add_argument("--max-iters", type=int, default=IterationConfig.max_iters)
    e.set_defaults(func=cmd_estimate)

    for name in SWEEPS:
        s = sub.add_parser(name, help=f"Monte Carlo {name.split('-')[0]} sweep")
        s.add_argument("--config", help="flat key = value config file (a manifest works too)")
        s.add_argument("--trials", type=int)
        s.add_argument("--seed", type=int)
        s.add_argument("--rate", help="comma-separated sampling rates")
        s.add_argument("--sigma-n", help="comma-separated noise levels")
        s.add_argument("--threshold-multiplier", help="comma-separated threshold multipliers")
        s.add_argument("--tol", type=float)
        s.add_argument("--max-iters", type=int)
        s.add_argument("--estimators", help="comma-separated subset of centroid,mim1,mim2")
        s.add_argument("--workers", type=int, default=1)
        s.add_argument("--out", help="results CSV path")
        s.set_defaults(func=cmd_sweep)

    c = sub.add_parser("selfcheck", help="verify the least-squares step against a grid oracle")
    c.add_argument("--oracle-windows", type=int, default=100)
    c.set_defaults(func=cmd_selfcheck)
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, NonUniformGridError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except WindowError as exc:
        kind = "too few samples" if isinstance(exc, TooFewSamplesError) else "degenerate window"
        print(f"{kind}: {exc}", file=sys.stderr)
        return EXIT_WINDOW
    except EstimatorError as exc:
        print(f"estimator failure: {exc}", file=sys.stderr)
        return EXIT_ESTIMATOR
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
