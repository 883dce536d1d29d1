"""Command-line interface: identity suites, transport runs, classical
trajectories, and the normal-ordering report, all with deterministic JSON
output.

Exit codes: 0 success, 1 checks ran but failed, 2 usage or malformed input,
3 path leaves the chamber margin, 4 particle collision during simulation.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from .laxdyn import CollisionError, PhasePoint, integrate
from .suites import SUITE_NAMES, run_suite, worker_count
from .symbolcalc import realization_report, symbol_of_permutation
from .transport import (
    ChamberPath,
    PathValidationError,
    TransportStepError,
    build_local_system,
    transport_dyson,
    transport_ode,
)

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_CHAMBER = 3
EXIT_COLLISION = 4


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}") from exc


def _rational_vector(text: str) -> tuple[Fraction, ...]:
    try:
        return tuple(Fraction(part.strip()) for part in text.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational vector: {text!r}") from exc


def _float_vector(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(part.strip()) for part in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a float vector: {text!r}") from exc


def _emit(report: dict, out: str | None) -> None:
    payload = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)


def _matrix_json(matrix: np.ndarray) -> list:
    return [[[float(v.real), float(v.imag)] for v in row] for row in matrix]


# -- verify ---------------------------------------------------------------------


def cmd_verify(args, parser) -> int:
    if args.n < 2:
        parser.error("--n must be >= 2")
    if args.deg < 1:
        parser.error("--deg must be >= 1")
    names = list(SUITE_NAMES) if args.suite == "all" else [args.suite]
    workers = worker_count(args.workers)
    records = [run_suite(name, args.n, args.deg, workers) for name in names]
    failure_count = sum(len(r["failures"]) for r in records)
    report = {
        "schemaVersion": SCHEMA_VERSION,
        "command": "verify",
        "config": {"n": args.n, "deg": args.deg, "suite": args.suite,
                   "workers": workers},
        "suites": records,
        "failureCount": failure_count,
    }
    _emit(report, args.out)
    return EXIT_OK if failure_count == 0 else EXIT_FAIL


# -- transport ------------------------------------------------------------------


def cmd_transport(args, parser) -> int:
    try:
        with open(args.path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        print(f"error: cannot read path file: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except json.JSONDecodeError as exc:
        print(f"error: malformed path JSON: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        path = ChamberPath.from_json(data)
    except PathValidationError as exc:
        print(f"error: path leaves the chamber margin: {exc}", file=sys.stderr)
        return EXIT_CHAMBER
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if len(args.p) != path.n:
        print(f"error: {len(args.p)} momenta for an N={path.n} path", file=sys.stderr)
        return EXIT_USAGE
    conn = build_local_system(path.n, args.p, args.c, prefactor=args.prefactor)
    try:
        result = transport_ode(conn, path, tol=args.tol)
    except TransportStepError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CHAMBER
    holonomy = None
    if path.is_closed():
        holonomy = float(np.max(np.abs(result.matrix - np.eye(conn.dim))))
    comparison = None
    if args.compare_dyson:
        order, steps = args.compare_dyson
        dyson = transport_dyson(conn, path, order=int(order), steps=int(steps))
        comparison = {
            "order": int(order),
            "steps": int(steps),
            "deviation": float(np.max(np.abs(dyson.matrix - result.matrix))),
        }
    report = {
        "schemaVersion": SCHEMA_VERSION,
        "command": "transport",
        "config": {"path": args.path, "tol": args.tol,
                   "prefactor": None if args.prefactor is None else str(args.prefactor)},
        "method": result.method,
        "N": path.n,
        "p": [str(v) for v in args.p],
        "c": str(args.c),
        "matrix": _matrix_json(result.matrix),
        "holonomyDeviation": holonomy,
        "stepStats": result.step_stats,
        "dysonComparison": comparison,
    }
    _emit(report, args.out)
    return EXIT_OK


# -- simulate -------------------------------------------------------------------


def cmd_simulate(args, parser) -> int:
    try:
        state = PhasePoint(args.x, args.p, g2=args.g2, omega=args.omega)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        trajectory = integrate(state, args.t, args.dt, jmax=args.jmax,
                               sample_stride=args.sample_stride)
    except CollisionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COLLISION
    if args.csv:
        trajectory.write_csv(args.csv)
    drift = trajectory.max_drift
    ok = drift["H"] <= args.energy_tol
    trace_checked = state.omega == 0.0 and state.g2 > 0.0
    if trace_checked:
        ok = ok and all(drift[f"I{j+1}"] <= args.drift_tol for j in range(args.jmax))
    report = {
        "schemaVersion": SCHEMA_VERSION,
        "command": "simulate",
        "config": {"x": list(args.x), "p": list(args.p), "g2": args.g2,
                   "omega": args.omega, "T": args.t, "dt": args.dt,
                   "jmax": args.jmax, "driftTol": args.drift_tol,
                   "energyTol": args.energy_tol},
        "maxDrift": drift,
        "traceInvariantsChecked": trace_checked,
        "samples": int(len(trajectory.times)),
        "withinTolerance": bool(ok),
    }
    _emit(report, args.out)
    return EXIT_OK if ok else EXIT_FAIL


# -- symbols --------------------------------------------------------------------


def cmd_symbols(args, parser) -> int:
    if args.n < 2:
        parser.error("--n must be >= 2")
    if not (0 <= args.j < args.n and 0 <= args.k < args.n) or args.j == args.k:
        parser.error("--j/--k must be distinct coordinates below --n")
    rep = realization_report(args.n, args.deg, args.j, args.k)
    order = args.order if args.order is not None else args.deg
    terms = symbol_of_permutation(args.n, args.j, args.k, order)
    report = {
        "schemaVersion": SCHEMA_VERSION,
        "command": "symbols",
        "config": {"n": args.n, "deg": args.deg, "j": args.j, "k": args.k,
                   "order": order},
        "realizations": rep,
        "symbolTerms": [t.to_json() for t in terms],
    }
    _emit(report, args.out)
    all_match = all(r["matchesSwap"] for r in rep["realizations"].values())
    return EXIT_OK if all_match else EXIT_FAIL


# -- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="calogero",
        description="Exact Dunkl-operator identity suites and chamber transport.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run exact identity suites")
    p.add_argument("--n", type=int, required=True, help="particle count (>= 2)")
    p.add_argument("--deg", type=int, default=6, help="spanning-set degree bound")
    p.add_argument("--suite", choices=SUITE_NAMES + ("all",), default="all")
    p.add_argument("--workers", type=int, default=None,
                   help="worker processes (default: CALOGERO_WORKERS or 1)")
    p.add_argument("--out", default=None, help="write the JSON report here")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("transport", help="parallel transport along a chamber path")
    p.add_argument("--path", required=True, help="path file: JSON {N, margin, waypoints}")
    p.add_argument("--p", type=_rational_vector, required=True,
                   help="momenta, comma-separated rationals")
    p.add_argument("--c", type=_rational, default=Fraction(1), help="coupling")
    p.add_argument("--tol", type=float, default=1e-10, help="local error tolerance")
    p.add_argument("--prefactor", type=_rational, default=None,
                   help="override the off-diagonal connection coefficient (default: c)")
    p.add_argument("--compare-dyson", nargs=2, metavar=("ORDER", "STEPS"), default=None,
                   help="also run the iterated-integral series and report the deviation")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_transport)

    p = sub.add_parser("simulate", help="classical trajectory with conserved-trace drift")
    p.add_argument("--x", type=_float_vector, required=True,
                   help="initial positions, strictly increasing")
    p.add_argument("--p", type=_float_vector, required=True, help="initial momenta")
    p.add_argument("--g2", type=float, default=1.0)
    p.add_argument("--omega", type=float, default=0.0)
    p.add_argument("--t", type=float, default=10.0, help="duration")
    p.add_argument("--dt", type=float, default=1e-4, help="RK4 step")
    p.add_argument("--jmax", type=int, default=4)
    p.add_argument("--drift-tol", type=float, default=1e-8)
    p.add_argument("--energy-tol", type=float, default=1e-8)
    p.add_argument("--sample-stride", type=int, default=100)
    p.add_argument("--csv", default=None, help="write the sampled trajectory here")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("symbols", help="normal-ordering realizations and swap symbol")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--deg", type=int, default=6)
    p.add_argument("--j", type=int, default=0)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--order", type=int, default=None,
                   help="symbol truncation order (default: --deg)")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_symbols)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args, parser)


if __name__ == "__main__":
    sys.exit(main())
