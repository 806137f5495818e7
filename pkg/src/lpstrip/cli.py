"""Command line entry point ``lpstrip``.

Every subcommand prints one JSON document (or a CSV table where the result
is tabular).  Exit status: 0 on success, 2 for invalid input, 3 when the
numerics fail, 1 when the output cannot be written.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys

from . import report
from .errors import DomainError, RootFindingError
from .experiments import EnsembleSpec, density_report, estimate_c_phi, sweep
from .extremal import (
    ExtremalFamily,
    apply_even_phi_fa,
    laguerre_b,
    predicted_quadratic_width,
    quadratic_testcase,
    r1_curve,
    solve_ga_roots,
)
from .operators import (
    apply_cos,
    apply_gauss,
    apply_multiplier,
    apply_series,
    apply_shift,
    apply_sin,
    descriptor_from_dict,
    iterated_cos_approx,
    power_sequence,
)
from .poly import ComplexPolynomial
from .roots import find_roots, strip_width

EXIT_OK = 0
EXIT_IO = 1
EXIT_INPUT = 2
EXIT_NUMERIC = 3


class InputError(ValueError):
    pass


class CsvUnavailable(InputError):
    pass


def _load_json(text: str, what: str):
    """Inline JSON, a bare shorthand word, or the path of a JSON file."""
    if os.path.isfile(text):
        try:
            with open(text, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {what} file: {exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        if text.strip().isidentifier():
            return text.strip()
        raise InputError(f"{what} is neither a file nor valid JSON") from None


def _phi(args):
    if args.phi is None:
        raise InputError("--phi is required")
    return descriptor_from_dict(_load_json(args.phi, "--phi"))


def _poly(args) -> ComplexPolynomial:
    if args.poly is None:
        raise InputError("--poly is required")
    data = _load_json(args.poly, "--poly")
    if isinstance(data, list):
        data = {"coeffs": data}
    return ComplexPolynomial.from_dict(data)


def _grid(text: str) -> list:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"bad grid {text!r}") from None


def _need(args, *names):
    for n in names:
        if getattr(args, n) is None:
            raise InputError(f"--{n.replace('_', '-')} is required")


def _positive(value, name):
    if not (math.isfinite(value) and value > 0):
        raise InputError(f"--{name} must be positive")


# -- subcommands ---------------------------------------------------------


def cmd_apply(args):
    f = _poly(args)
    op = args.op
    params = {"op": op, "poly": f.to_dict()}
    if op == "series":
        phi = _phi(args)
        params["phi"] = phi.to_dict()
        g = apply_series(phi, f)
    elif op == "shift":
        _need(args, "a")
        g = apply_shift(args.a, f)
        params["a"] = args.a
    elif op in ("cos", "sin"):
        _need(args, "a")
        _positive(args.a, "a")
        fn = apply_cos if op == "cos" else apply_sin
        g = fn(args.a, args.b, f)
        params.update(a=args.a, b=args.b)
    elif op == "gauss":
        _need(args, "a")
        _positive(args.a, "a")
        g = apply_gauss(args.a, f)
        params["a"] = args.a
    elif op == "itercos":
        _need(args, "a")
        _positive(args.a, "a")
        g = iterated_cos_approx(args.a, args.n, f)
        params.update(a=args.a, n=args.n)
    elif op == "multiplier":
        _need(args, "a")
        g = apply_multiplier(power_sequence(args.a, f.degree + 1), f)
        params["a"] = args.a
    else:  # argparse restricts choices
        raise InputError(f"unknown op {op}")
    return params, g.to_dict(), None


def cmd_roots(args):
    f = _poly(args)
    rs = find_roots(f)
    rows = [(z.real, z.imag, res) for z, res in zip(rs.roots, rs.residuals)]
    return {"poly": f.to_dict()}, rs.to_dict(), (("re", "im", "residual"), rows)


def cmd_strip(args):
    f = _poly(args)
    if args.real_tol is not None:
        _positive(args.real_tol, "real-tol")
    rep = strip_width(find_roots(f), args.real_tol)
    return {"poly": f.to_dict(), "real_tol": args.real_tol}, rep.to_dict(), None


def cmd_extremal(args):
    kind = args.kind
    phi = _phi(args)
    params = {"kind": kind, "phi": phi.to_dict()}
    if kind == "fa":
        _need(args, "a", "r")
        res = apply_even_phi_fa(phi, ExtremalFamily("FA", args.a, args.r))
        params.update(a=args.a, r=args.r)
        return params, res.to_dict(), None
    if kind == "ga":
        _need(args, "a", "r")
        res = solve_ga_roots(phi, args.m, ExtremalFamily("GA", args.a, args.r, args.m))
        params.update(a=args.a, r=args.r, m=args.m)
        return params, res.to_dict(), None
    if kind == "r1curve":
        _need(args, "r", "grid")
        grid = _grid(args.grid)
        curve = r1_curve(phi, args.r, grid)
        params.update(r=args.r, grid=grid)
        result = [dict(a=a, **res.to_dict()) for a, res in curve]
        rows = [(a, res.case.value, res.r1, res.ratio_log, res.lower_bound) for a, res in curve]
        return params, result, (("a", "case", "r1", "ratio_log", "lower_bound"), rows)
    _need(args, "a", "r")
    rep = quadratic_testcase(phi, args.a, args.r)
    params.update(a=args.a, r=args.r)
    result = rep.to_dict()
    result["b_phi"] = laguerre_b(phi)
    result["predicted_half_width"] = predicted_quadratic_width(phi, args.a, args.r)
    return params, result, None


def _spec(args, r):
    return EnsembleSpec(args.count, args.degree, r, args.seed, args.real_fraction)


def cmd_sweep(args):
    _need(args, "r", "grid")
    phi = _phi(args)
    grid = _grid(args.grid)
    spec = _spec(args, args.r)
    # an empty grid is a legitimate request for an empty table
    recs = sweep(phi, args.r, grid, spec) if grid else []
    est = estimate_c_phi(phi, args.r, grid, spec) if grid else None
    params = {"phi": phi.to_dict(), "r": args.r, "grid": grid, "ensemble": spec.to_dict()}
    result = {
        "records": [rec.to_dict() for rec in recs],
        "b_phi": laguerre_b(phi),
        "c_estimate": est.to_dict() if est else None,
    }
    rows = [[getattr(rec, k) for k in report.SWEEP_HEADER] for rec in recs]
    return params, result, (report.SWEEP_HEADER, rows)


def cmd_density(args):
    phi = _phi(args)
    rep = density_report(phi, args.t_max, args.steps)
    params = {"phi": phi.to_dict(), "t_max": args.t_max, "steps": args.steps}
    rows = list(zip(rep.t_grid, rep.n_of_t))
    return params, rep.to_dict(), (("t", "n"), rows)


# -- parser --------------------------------------------------------------


def _common(p, *, phi=False, poly=False):
    if phi:
        p.add_argument("--phi", help="descriptor: file, inline JSON or shorthand (cos, sin, gauss, exp, one)")
    if poly:
        p.add_argument("--poly", help='polynomial: file or inline JSON {"coeffs": [[re, im], ...]} or [c0, c1, ...]')
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", help="write here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lpstrip", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true", help="log warnings to stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("apply", help="apply an operator to a polynomial")
    p.add_argument("--op", choices=("series", "shift", "cos", "sin", "gauss", "itercos", "multiplier"),
                   default="series")
    p.add_argument("--a", type=float, help="shift, frequency, Gaussian width or multiplier base")
    p.add_argument("--b", type=float, default=0.0, help="phase for cos/sin")
    p.add_argument("--n", type=int, default=8, help="itercos refinement")
    _common(p, phi=True, poly=True)
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("roots", help="all roots of a polynomial")
    _common(p, poly=True)
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("strip", help="strip half-width of a polynomial's zeros")
    p.add_argument("--real-tol", type=float)
    _common(p, poly=True)
    p.set_defaults(func=cmd_strip)

    p = sub.add_parser("extremal", help="closed-form strip widths of the extremal families")
    p.add_argument("kind", choices=("fa", "ga", "r1curve", "quadratic"))
    p.add_argument("--a", type=float)
    p.add_argument("--r", type=float)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--grid", help="comma-separated ascending a values")
    _common(p, phi=True)
    p.set_defaults(func=cmd_extremal)

    p = sub.add_parser("sweep", help="measured strip widths over an a-grid")
    p.add_argument("--r", type=float)
    p.add_argument("--grid")
    p.add_argument("--count", type=int, default=50)
    p.add_argument("--degree", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--real-fraction", type=float, default=0.0)
    _common(p, phi=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("density", help="zero counts n(t) of phi")
    p.add_argument("--t-max", type=float, default=100.0)
    p.add_argument("--steps", type=int, default=100)
    _common(p, phi=True)
    p.set_defaults(func=cmd_density)
    return ap


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.verbose else logging.ERROR, stream=stderr)
    try:
        params, result, table = args.func(args)
        seed = params.get("ensemble", {}).get("seed")
        if args.format == "csv":
            if table is None:
                raise CsvUnavailable(f"{args.command} has no tabular form; use --format json")
            text = report.csv_table(*table)
        else:
            cmd = args.command if args.command != "extremal" else f"extremal {args.kind}"
            text = report.json_document(cmd, params, result, seed)
    except (RootFindingError, ArithmeticError) as exc:
        print(f"lpstrip: numeric failure: {exc}", file=stderr)
        return EXIT_NUMERIC
    except (InputError, DomainError, ValueError, TypeError, KeyError) as exc:
        print(f"lpstrip: invalid input: {exc}", file=stderr)
        return EXIT_INPUT
    try:
        report.emit(text, args.out, stdout)
    except OSError as exc:
        print(f"lpstrip: cannot write output: {exc}", file=stderr)
        return EXIT_IO
    return EXIT_OK


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
