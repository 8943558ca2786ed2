"""Command-line front end.

Subcommands: simulate, moments, classify, spectrum, sweep.  Output goes to
stdout or --out (relative paths are resolved against $OQW_OUT_DIR when set).
Exit codes: 0 success, 2 invalid configuration, 3 internal invariant
violation.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import phases, simulate, spectral
from .errors import OqwalkError, OutOfRangeError, ParseError
from .walk import TAU, WalkParameters, parse_angle

FORMATS = ("csv", "json", "gnuplot")


class ConfigError(Exception):
    pass


def _parse_params(args) -> WalkParameters:
    try:
        theta0 = parse_angle(args.theta0)
        theta1 = parse_angle(args.theta1, theta0=theta0)
    except (ParseError, OutOfRangeError, ZeroDivisionError) as exc:
        raise ConfigError(str(exc)) from exc
    p = getattr(args, "p", 0.5)
    if not 0.0 <= p <= 1.0:
        raise ConfigError(f"p must lie in [0, 1], got {p}")
    return WalkParameters(theta0=theta0, theta1=theta1, p=p)


def _resolve_out(path: str | None) -> str | None:
    if path is None or path == "-":
        return None
    out_dir = os.environ.get("OQW_OUT_DIR", "")
    if out_dir and not os.path.isabs(path):
        return os.path.join(out_dir, path)
    return path


def _emit_table(columns, rows, fmt, out_path) -> None:
    """Write a column table as csv, gnuplot, or json."""
    if fmt == "json":
        text = json.dumps({"columns": list(columns), "rows": rows}) + "\n"
    elif fmt == "gnuplot":
        lines = ["# " + " ".join(columns)]
        lines += [" ".join(cell for cell in row) for row in rows]
        text = "\n".join(lines) + "\n"
    else:
        lines = [",".join(columns)]
        lines += [",".join(cell for cell in row) for row in rows]
        text = "\n".join(lines) + "\n"
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w") as fh:
            fh.write(text)


def _fmt(value: float) -> str:
    return repr(float(value))


def cmd_simulate(args) -> int:
    params = _parse_params(args)
    if args.t < 0:
        raise ConfigError("--t must be >= 0")
    state = simulate.evolve(params, args.t)
    total = state.total_trace()
    if abs(total - 1.0) > 1e-10:
        raise OqwalkError(f"total probability {total!r} drifted from 1")
    dist = simulate.distribution(state)
    rows = [
        [str(int(x)), f"{p:.17g}"]
        for x, p in zip(dist.positions, dist.probabilities)
    ]
    _emit_table(("x", "probability"), rows, args.format, _resolve_out(args.out))
    return 0


def cmd_moments(args) -> int:
    params = _parse_params(args)
    if args.t_max < 0:
        raise ConfigError("--t-max must be >= 0")
    if args.stride < 1:
        raise ConfigError("--stride must be >= 1")
    series = simulate.moment_series(params, args.t_max)
    rows = []
    for rep in series[:: args.stride]:
        e1c, e2c, sigc = phases.closed_moment_columns(params, rep.t, args.eps)
        row = [str(rep.t), _fmt(rep.e1), _fmt(rep.e2), _fmt(rep.sigma)]
        row += [_fmt(v) if v is not None else "" for v in (e1c, e2c, sigc)]
        if rep.t > 0:
            row += [_fmt(rep.sigma / rep.t), _fmt(rep.sigma / math.sqrt(rep.t))]
        else:
            row += ["", ""]
        rows.append(row)
    columns = (
        "t", "e1", "e2", "sigma",
        "e1_closed", "e2_closed", "sigma_closed",
        "sigma_over_t", "sigma_over_sqrt_t",
    )
    _emit_table(columns, rows, args.format, _resolve_out(args.out))
    return 0


def cmd_classify(args) -> int:
    params = _parse_params(args)
    if args.eps <= 0.0:
        raise ConfigError("--eps must be > 0")
    if args.format != "json":
        raise ConfigError("classify only supports --format json")
    report = phases.sigma_limit(params, args.eps)
    case = "ballistic" if report.phase.kind is phases.PhaseKind.BALLISTIC else "diffusive"
    payload = {
        "theta0": params.theta0,
        "theta1": params.theta1,
        "p": params.p,
        "case": case,
        "subcase": report.phase.subcase.value,
        "scaling_exponent": report.scaling_exponent,
        "limit_constant": report.limit_constant,
        "bounded_motion": report.bounded_motion,
    }
    text = json.dumps(payload) + "\n"
    out_path = _resolve_out(args.out)
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w") as fh:
            fh.write(text)
    return 0


def cmd_spectrum(args) -> int:
    params = _parse_params(args)
    try:
        k_raw = parse_angle(args.k)
    except (ParseError, ZeroDivisionError) as exc:
        raise ConfigError(str(exc)) from exc
    k = k_raw if k_raw < math.pi else k_raw - TAU  # wrap into [-pi, pi)
    report = spectral.spectrum(params, k, args.eps)
    rows = []
    for idx, lam in enumerate(report.eigenvalues, start=1):
        rows.append(["eigenvalue", str(idx), _fmt(lam.real), _fmt(lam.imag)])
    for idx, c in enumerate(report.char_poly):
        rows.append(["char_poly", str(idx), _fmt(c.real), _fmt(c.imag)])
    if report.cubic_factor is not None:
        for idx, c in enumerate(report.cubic_factor):
            rows.append(["cubic_factor", str(idx), _fmt(c.real), _fmt(c.imag)])
        linear = np.array([2.0 * params.c0 * params.s0 * params.s1 * math.cos(k), 1.0])
        residual = float(
            np.abs(report.char_poly - np.convolve(linear, report.cubic_factor)).max()
        )
        rows.append(["residual", "0", _fmt(residual), _fmt(0.0)])
    _emit_table(("kind", "index", "re", "im"), rows, args.format, _resolve_out(args.out))
    return 0


def _sweep_row(i: int, grid: int, p: float, eps: float) -> list[list[str]]:
    theta0 = TAU * i / grid
    c0, s0 = math.cos(theta0), math.sin(theta0)
    rows = []
    for j in range(grid):
        theta1 = TAU * j / grid
        params = WalkParameters(theta0=theta0, theta1=theta1, p=p)
        report = phases.sigma_limit(params, eps)
        case = (
            "ballistic"
            if report.phase.kind is phases.PhaseKind.BALLISTIC
            else "diffusive"
        )
        rows.append([_fmt(theta0), _fmt(theta1), case, _fmt(report.limit_constant)])
    return rows


def cmd_sweep(args) -> int:
    if args.grid < 2:
        raise ConfigError("--grid must be >= 2")
    if args.eps <= 0.0:
        raise ConfigError("--eps must be > 0")
    if args.threads < 1:
        raise ConfigError("--threads must be >= 1")
    if not 0.0 <= args.p <= 1.0:
        raise ConfigError(f"p must lie in [0, 1], got {args.p}")
    grid, p, eps = args.grid, args.p, args.eps
    if args.threads == 1:
        row_blocks = [_sweep_row(i, grid, p, eps) for i in range(grid)]
    else:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            row_blocks = list(
                pool.map(lambda i: _sweep_row(i, grid, p, eps), range(grid))
            )
    rows = [row for block in row_blocks for row in block]
    out_path = _resolve_out(args.out)
    _emit_table(("theta0", "theta1", "case", "limit_constant"), rows, args.format, out_path)

    # companion file: the analytic ballistic curve at the same resolution
    if out_path is not None:
        stem, ext = os.path.splitext(out_path)
        curve_rows = []
        for i in range(grid):
            theta0 = TAU * i / grid
            for theta1 in phases.ballistic_set(theta0, eps=1e-12):
                curve_rows.append([_fmt(theta0), _fmt(theta1)])
        _emit_table(("theta0", "theta1"), curve_rows, args.format, stem + "_curve" + ext)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oqwalk",
        description="Simulate and classify the two-angle open quantum walk on the integer line.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp, with_p=True):
        sp.add_argument("--theta0", required=True, help="angle string, e.g. 'pi/6' or '0.5236'")
        sp.add_argument("--theta1", required=True, help="angle string; 'arcsin(c0/s0)' is allowed")
        if with_p:
            sp.add_argument("--p", type=float, default=0.5, help="initial mixing weight in [0,1]")
        sp.add_argument("--format", choices=FORMATS, default="csv")
        sp.add_argument("--out", default=None, help="output path ('-' or omitted: stdout)")

    sp = sub.add_parser("simulate", help="position distribution at time t")
    add_common(sp)
    sp.add_argument("--t", type=int, required=True)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("moments", help="moment time series with closed-form columns")
    add_common(sp)
    sp.add_argument("--t-max", type=int, required=True)
    sp.add_argument("--stride", type=int, default=1)
    sp.add_argument("--eps", type=float, default=1e-12)
    sp.set_defaults(func=cmd_moments)

    sp = sub.add_parser("classify", help="phase class and limit constant as JSON")
    add_common(sp)
    sp.set_defaults(format="json")
    sp.add_argument("--eps", type=float, default=1e-12)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("spectrum", help="eigenvalues and polynomial factors at one wavenumber")
    add_common(sp, with_p=False)
    sp.add_argument("--k", required=True, help="wavenumber as an angle string")
    sp.add_argument("--eps", type=float, default=1e-12)
    sp.set_defaults(p=0.5)
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("sweep", help="classify a grid x grid lattice over [0,2*pi)^2")
    sp.add_argument("--grid", type=int, default=629)
    sp.add_argument("--p", type=float, default=0.5)
    sp.add_argument("--eps", type=float, default=1e-12)
    sp.add_argument("--threads", type=int, default=1)
    sp.add_argument("--format", choices=FORMATS, default="csv")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OqwalkError as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # never crash without an exit code
        print(f"internal error: {exc}", file=sys.stderr)
        return 3


def run() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    run()
