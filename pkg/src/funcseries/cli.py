"""Command-line front-end.

Subcommands:

* ``expand``    -- coefficient report as JSON
* ``plot``      -- CSV grid of f and its partial sums over real z
* ``check``     -- engine vs. jet-oracle comparison (exit 5 on mismatch)
* ``remainder`` -- measured error and bounds at a point
* ``teixeira``  -- two-sided contour-coefficient report (--s supplies theta)

Diagnostics go to stderr only.  Exit codes: 0 success, 1 other errors,
2 parse errors, 3 vanishing inner derivative at the expansion point,
4 singularities, 5 oracle disagreement.  Output is deterministic for a
fixed configuration: floats print as their shortest round-trip decimal
and JSON key order is fixed.

A config file of ``key=value`` lines (keys named like the long flags,
e.g. ``order=6``) supplies defaults; explicit flags win.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from .errors import (
    CompositeDerivativeZero,
    ConstantComposite,
    FuncSeriesError,
    LeadingCoefficientZero,
    ParseError,
    QuadratureSingularity,
    SingularAtExpansionPoint,
    SingularEvaluation,
)
from .expr import evaluate, parse
from .oracle import CATALOG, oracle_coefficients
from .remainder import complex_bound, lagrange_bound, measured_error
from .series import (
    DERIVATIVE_ZERO_TOL,
    TERMINATION_TOL,
    ExpansionRequest,
    expand,
    partial_sum,
)
from .teixeira import ContourSpec, teixeira_expand, teixeira_partial_sum

#: engine/oracle agreement threshold for the check subcommand
CHECK_TOL = 1e-8


def _parse_complex(text: str) -> complex:
    if "," in text:
        re_part, im_part = text.split(",", 1)
        return complex(float(re_part), float(im_part))
    return complex(float(text), 0.0)


def _parse_grid(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("grid must be start:stop:count")
    start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    if count < 2:
        raise argparse.ArgumentTypeError("grid count must be >= 2")
    return start, stop, count


def _parse_contour(text: str) -> tuple[complex, float]:
    center_text, _, radius_text = text.rpartition(":")
    if not center_text:
        raise argparse.ArgumentTypeError("contour must be center:radius")
    return _parse_complex(center_text), float(radius_text)


def _fmt_float(x: float) -> str:
    return repr(float(x))


def _emit(text: str, out_path: str | None):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="funcseries",
        description="Expand a function as a power series in another function.")
    top.add_argument("--config", default=None,
                     help="key=value file of flag defaults")
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, with_s=True):
        p.add_argument("--f", required=True, help="function to expand")
        if with_s:
            p.add_argument("--s", required=True,
                           help="inner function (theta for teixeira)")
        p.add_argument("--z0", type=_parse_complex, default=0j,
                       help="expansion point, real or re,im")
        p.add_argument("--order", type=int, default=6)
        p.add_argument("--tol-termination", type=float, default=TERMINATION_TOL)
        p.add_argument("--tol-deriv-zero", type=float, default=DERIVATIVE_ZERO_TOL)
        p.add_argument("--out", default=None, help="output file (default stdout)")

    p = sub.add_parser("expand", help="JSON coefficient report")
    common(p)
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("plot", help="CSV of f and partial sums on a real grid")
    common(p)
    p.add_argument("--grid", type=_parse_grid, default=(-1.2, 1.2, 121),
                   help="real grid as start:stop:count")
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("check", help="engine vs independent oracle")
    p.add_argument("--f", default=None, help="single pair instead of the catalog")
    p.add_argument("--s", default=None)
    p.add_argument("--z0", type=_parse_complex, default=0j)
    p.add_argument("--order", type=int, default=10)
    p.add_argument("--tol-termination", type=float, default=TERMINATION_TOL)
    p.add_argument("--tol-deriv-zero", type=float, default=DERIVATIVE_ZERO_TOL)
    p.add_argument("--out", default=None)
    p.add_argument("--corrupt", type=int, default=None, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("remainder", help="measured error and bounds at a point")
    common(p)
    p.add_argument("--z", type=_parse_complex, default=None, required=True,
                   help="evaluation point, real or re,im")
    p.add_argument("--samples", type=int, default=64)
    p.set_defaults(func=cmd_remainder)

    p = sub.add_parser("teixeira", help="two-sided contour coefficients")
    common(p)
    p.add_argument("--quadrature-points", type=int, default=512)
    p.add_argument("--contour", type=_parse_contour, action="append", default=None,
                   help="center:radius; give twice for outer then inner")
    p.add_argument("--x", type=_parse_complex, default=None,
                   help="optionally evaluate the partial sum at this point")
    p.set_defaults(func=cmd_teixeira)
    return top


def _apply_config(argv: list[str]) -> list[str]:
    """Splice config-file values in as defaults (before explicit flags)."""
    if "--config" not in argv:
        return argv
    at = argv.index("--config")
    path = argv[at + 1]
    head, tail = argv[: at + 2], argv[at + 2:]
    if not tail:
        return argv
    command, rest = tail[0], tail[1:]
    injected: list[str] = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition("=")
            flag = "--" + key.strip().replace("_", "-")
            if flag not in rest:
                injected += [flag, value.strip()]
    return head + [command] + injected + rest


def _expansion_from(args) -> "tuple":
    f = parse(args.f)
    s = parse(args.s)
    req = ExpansionRequest(f, s, args.z0, args.order,
                           termination_tol=args.tol_termination,
                           derivative_zero_tol=args.tol_deriv_zero)
    return expand(req)


def cmd_expand(args) -> int:
    exp = _expansion_from(args)
    report = exp.as_dict()
    report["magnitudes"] = [abs(complex(re, im)) for re, im in report["coefficients"]]
    report["terminated"] = exp.terminated_at is not None
    _emit(json.dumps(report, indent=2) + "\n", args.out)
    return 0


def cmd_plot(args) -> int:
    exp = _expansion_from(args)
    start, stop, count = args.grid
    step = (stop - start) / (count - 1)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["z", "f"] + [f"S{k}" for k in range(exp.order + 1)])
    for i in range(count):
        z = start + i * step
        row = [_fmt_float(z)]
        try:
            row.append(_fmt_float(evaluate(exp.f, z).real))
        except SingularEvaluation:
            row.append("")
        try:
            u = evaluate(exp.s, z) - exp.s0
            total = exp.coefficients[0]
            sums = [total]
            u_power = 1.0 + 0j
            for c in exp.coefficients[1:]:
                u_power *= u
                total = total + c * u_power
                sums.append(total)
            row += [_fmt_float(v.real) for v in sums]
        except SingularEvaluation:
            row += [""] * (exp.order + 1)
        writer.writerow(row)
    _emit(buffer.getvalue(), args.out)
    return 0


def cmd_check(args) -> int:
    if args.f is not None and args.s is None:
        raise ParseError("--s is required when --f is given", 0)
    if args.f is not None:
        pairs = [("user", args.f, args.s, args.z0)]
    else:
        pairs = list(CATALOG)

    reports = []
    worst = 0.0
    for label, f_text, s_text, z0 in pairs:
        exp = expand(ExpansionRequest(parse(f_text), parse(s_text), z0, args.order,
                                      termination_tol=args.tol_termination,
                                      derivative_zero_tol=args.tol_deriv_zero))
        engine = list(exp.coefficients)
        if args.corrupt is not None and 0 <= args.corrupt < len(engine):
            engine[args.corrupt] += 1.0
        oracle = oracle_coefficients(parse(f_text), parse(s_text), z0, args.order)
        deviation = max(abs(e - o) / max(1.0, abs(o))
                        for e, o in zip(engine, oracle))
        worst = max(worst, deviation)
        reports.append({
            "pair": label,
            "f": f_text,
            "s": s_text,
            "z0": [complex(z0).real, complex(z0).imag],
            "order": args.order,
            "engine": [[c.real, c.imag] for c in engine],
            "oracle": [[c.real, c.imag] for c in oracle],
            "max_relative_deviation": deviation,
            "terminated_at": exp.terminated_at,
        })
    ok = worst < CHECK_TOL
    out = {"pairs": reports, "max_relative_deviation": worst,
           "tolerance": CHECK_TOL, "ok": ok}
    _emit(json.dumps(out, indent=2) + "\n", args.out)
    if not ok:
        print(f"oracle disagreement: max relative deviation {worst:.3g} "
              f"exceeds {CHECK_TOL:g}", file=sys.stderr)
        return 5
    return 0


def cmd_remainder(args) -> int:
    exp = _expansion_from(args)
    z = args.z
    estimates = [measured_error(exp, z, args.order).as_dict(),
                 complex_bound(exp, z, args.order).as_dict()]
    if z.imag == 0 and exp.z0.imag == 0:
        try:
            estimates.append(lagrange_bound(exp, z, args.order, args.samples).as_dict())
        except FuncSeriesError as exc:
            estimates.append({"kind": "real-lagrange", "order": args.order,
                              "z": [z.real, z.imag], "bound": None,
                              "skipped": str(exc)})
    report = exp.as_dict()
    report["estimates"] = estimates
    _emit(json.dumps(report, indent=2) + "\n", args.out)
    return 0


def cmd_teixeira(args) -> int:
    f = parse(args.f)
    theta = parse(args.s)
    contours = args.contour or [(complex(args.z0), 1.0)]
    points = args.quadrature_points
    outer = ContourSpec(contours[0][0], contours[0][1], points)
    if len(contours) > 1:
        inner = ContourSpec(contours[1][0], contours[1][1], points)
    else:
        inner = ContourSpec(outer.center, outer.radius / 2, points)
    tx = teixeira_expand(f, theta, args.z0, outer, inner, args.order)
    report = tx.as_dict()
    if args.x is not None:
        value = teixeira_partial_sum(tx, args.x, args.order)
        report["partial_sum"] = {"x": [args.x.real, args.x.imag],
                                 "value": [value.real, value.imag]}
    _emit(json.dumps(report, indent=2) + "\n", args.out)
    return 0


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        argv = _apply_config(argv)
        args = _build_parser().parse_args(argv)
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except (CompositeDerivativeZero, ConstantComposite, LeadingCoefficientZero) as exc:
        print(f"vanishing inner derivative: {exc}", file=sys.stderr)
        return 3
    except (SingularEvaluation, SingularAtExpansionPoint, QuadratureSingularity) as exc:
        print(f"singularity: {exc}", file=sys.stderr)
        return 4
    except FuncSeriesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
