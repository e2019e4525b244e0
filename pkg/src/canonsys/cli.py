"""Command-line front end.

Exit status: 0 on success, 1 on validation or usage errors, 2 on numerical
breakdown (singular Toeplitz family, quadrature failure).
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys

import numpy as np

from . import svg
from .convergence import REFERENCES, HatFunction, eligibility, run_ladder
from .expr import EvaluationError, ExprSyntaxError
from .measure import (MEASURE_JSON_GRAMMAR, MeasureError, load_measure, measure_to_dict,
                      pw_diagnostic, validate_even_positive)
from .moments import compute_moments, moment_count
from .opuc import szego_from_moments, verify_step_identity
from .quadrature import QuadratureError
from .recovery import h22, kernel_transform, recover_hamiltonian
from .selftest import run_selftest
from .toeplitz import BREAKDOWN_TOL, ToeplitzBreakdown, solve_nested

EXIT_OK, EXIT_INVALID, EXIT_BREAKDOWN = 0, 1, 2

FLAGS_HELP = """\
flags: --measure PATH  --T REAL|PI_EXPR  --Ts LIST  --tmax REAL  --t REAL  --N INT
       --out PATH  --svg PATH  --summary PATH  --intervals a:b[,a:b...]
       --hats l:p:r[,...]  --reference NAME|auto|none  --delta REAL  --window REAL
       --range REAL  --c REAL  --tol REAL
PI_EXPR: pi, 2pi, 2*pi, pi/2, 3pi/4, or a plain number"""

_PI_EXPR = re.compile(r"^\s*(?P<k>[0-9.eE+-]+)?\s*\*?\s*pi\s*(?:/\s*(?P<d>[0-9.eE+-]+))?\s*$")


def _fmt(v) -> str:
    return format(float(v), ".17g")


def parse_real(text: str) -> float:
    """A float, or a multiple of pi written like ``2pi``, ``pi/2`` or ``3*pi/4``."""
    m = _PI_EXPR.match(text)
    if m:
        k = float(m.group("k")) if m.group("k") else 1.0
        d = float(m.group("d")) if m.group("d") else 1.0
        value = k * math.pi / d
    else:
        try:
            value = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a number or pi expression: {text!r}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"not finite: {text!r}")
    return value


def positive_real(text: str) -> float:
    value = parse_real(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return value


def real_list(text: str):
    return [positive_real(part) for part in text.split(",") if part.strip()]


def interval_list(text: str):
    out = []
    for part in text.split(","):
        try:
            a, b = part.split(":")
            a, b = parse_real(a), parse_real(b)
        except (ValueError, argparse.ArgumentTypeError):
            raise argparse.ArgumentTypeError(f"interval must look like a:b, got {part!r}") from None
        if not 0 <= a < b:
            raise argparse.ArgumentTypeError(f"interval needs 0 <= a < b, got {part!r}")
        out.append((a, b))
    return out


def hat_list(text: str):
    out = []
    for part in text.split(","):
        try:
            out.append(HatFunction(*(parse_real(p) for p in part.split(":"))))
        except (TypeError, ValueError, argparse.ArgumentTypeError):
            raise argparse.ArgumentTypeError(f"hat must look like l:p:r, got {part!r}") from None
    return out


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n\n{FLAGS_HELP}\n\n{MEASURE_JSON_GRAMMAR}\n")
        sys.exit(EXIT_INVALID)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="canonsys", description="Inverse spectral problems via periodization.",
                     epilog=FLAGS_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, *, T=True):
        p.add_argument("--measure", required=True, metavar="PATH")
        if T:
            p.add_argument("--T", type=positive_real, default=math.pi, metavar="REAL|PI_EXPR")
        p.add_argument("--out", metavar="PATH")
        p.add_argument("--tol", type=positive_real, default=BREAKDOWN_TOL,
                       help="Toeplitz breakdown tolerance relative to a_0")

    p = sub.add_parser("moments", help="trigonometric moments of the 2T-periodization")
    common(p)
    p.add_argument("--N", type=int, default=None)
    p.add_argument("--tmax", type=positive_real, default=None)

    p = sub.add_parser("recover", help="recovered h11 / h22 step function")
    common(p)
    p.add_argument("--tmax", type=positive_real, required=True)
    p.add_argument("--svg", metavar="PATH")

    p = sub.add_parser("kernel", help="kernel transform f_t on [-t, t]")
    common(p)
    p.add_argument("--t", type=positive_real, default=None)
    p.add_argument("--tmax", type=positive_real, default=None, help="alias for --t")
    p.add_argument("--svg", metavar="PATH")

    p = sub.add_parser("opuc", help="phi_n(1)^2 against the Toeplitz steps")
    common(p)
    p.add_argument("--N", type=int, default=None)
    p.add_argument("--tmax", type=positive_real, default=None)

    p = sub.add_parser("converge", help="periodization ladder")
    common(p, T=False)
    p.add_argument("--Ts", type=real_list, required=True, metavar="LIST")
    p.add_argument("--intervals", type=interval_list, default=[])
    p.add_argument("--hats", type=hat_list, default=[])
    p.add_argument("--tmax", type=positive_real, default=None)
    p.add_argument("--c", type=positive_real, default=None)
    p.add_argument("--reference", default="auto")
    p.add_argument("--summary", metavar="PATH", help="write the JSON summary here (default: stderr)")
    p.add_argument("--svg", metavar="PATH")

    p = sub.add_parser("check-pw", help="heuristic Paley-Wiener diagnostic")
    p.add_argument("--measure", required=True, metavar="PATH")
    p.add_argument("--range", type=positive_real, default=50.0)
    p.add_argument("--delta", type=positive_real, default=0.5)
    p.add_argument("--window", type=positive_real, default=1.0)
    p.add_argument("--out", metavar="PATH")

    sub.add_parser("selftest", help="run oracle cross-checks")
    return parser


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(header, rows) -> str:
    lines = [header]
    for row in rows:
        lines.append(",".join(v if isinstance(v, str) else _fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def _order(args, default=20) -> int:
    if getattr(args, "N", None) is not None:
        if args.N < 0:
            raise ValueError("--N must be non-negative")
        return args.N
    if getattr(args, "tmax", None) is not None:
        return moment_count(args.T, args.tmax) - 1
    return default


def cmd_moments(args):
    spec = load_measure(args.measure)
    m = compute_moments(spec, args.T, _order(args))
    rows = ((str(n), _fmt(a), tag) for n, (a, tag) in enumerate(zip(m.values, m.provenance)))
    _emit(_csv("n,a_n,provenance", rows), args.out)


def cmd_recover(args):
    spec = load_measure(args.measure)
    step = recover_hamiltonian(spec, args.T, args.tmax)
    inv = h22(step)
    edges = step.edges
    rows = zip(edges[:-1], edges[1:], step.values, inv.values)
    _emit(_csv("t_left,t_right,h11,h22", rows), args.out)
    if args.svg:
        _emit(svg.step_plot([("h11", edges, step.values)], title=f"h11, T = {args.T:.6g}",
                            ylabel="h11"), args.svg)


def cmd_kernel(args):
    t = args.t if args.t is not None else args.tmax
    if t is None:
        raise ValueError("kernel needs --t")
    spec = load_measure(args.measure)
    n = moment_count(args.T, t)
    m = compute_moments(spec, args.T, n)
    f = kernel_transform(m, t, solve_nested(m, n - 1, tol=args.tol))
    rows = zip(f.edges[:-1], f.edges[1:], f.values)
    _emit(_csv("s_left,s_right,f_t", rows), args.out)
    if args.svg:
        _emit(svg.step_plot([("f_t", f.edges, f.values)], title=f"f_t, t = {t:.6g}, T = {args.T:.6g}",
                            xlabel="s", ylabel="f_t"), args.svg)


def cmd_opuc(args):
    spec = load_measure(args.measure)
    order = _order(args)
    m = compute_moments(spec, args.T, order)
    report = verify_step_identity(szego_from_moments(m, order, tol=args.tol),
                                  solve_nested(m, order, tol=args.tol))
    rows = ((str(n), a, b, c) for n, (a, b, c) in
            enumerate(zip(report.phi1_sq, report.toeplitz_steps, report.rel_dev)))
    _emit(_csv("n,phi1_sq,step_from_toeplitz,rel_dev", rows), args.out)


def _match_reference(spec, name):
    if name == "none":
        return None
    if name != "auto":
        if name not in REFERENCES:
            raise ValueError(f"unknown reference {name!r}; choose from {sorted(REFERENCES)}")
        return REFERENCES[name]
    target = measure_to_dict(spec)
    for ref in REFERENCES.values():
        if ref.measure is None:
            continue
        cand = measure_to_dict(ref.measure())
        if _same_measure(cand, target):
            return ref
    return None


def _same_measure(a, b) -> bool:
    if (a["density"] is None) != (b["density"] is None) or len(a["atoms"]) != len(b["atoms"]):
        return False
    for p, q in zip(a["atoms"], b["atoms"]):
        if not (math.isclose(p["x"], q["x"], rel_tol=1e-12, abs_tol=1e-12)
                and math.isclose(p["mass"], q["mass"], rel_tol=1e-12)):
            return False
    da, db = a["density"], b["density"]
    if da is None:
        return True
    if da.get("kind") != db.get("kind") or da.get("name") != db.get("name"):
        return False
    if da["kind"] == "expr":
        return da["source"].replace(" ", "") == db["source"].replace(" ", "")
    return len(da["params"]) == len(db["params"]) and all(
        math.isclose(x, y, rel_tol=1e-12) for x, y in zip(da["params"], db["params"]))


def cmd_converge(args):
    spec = load_measure(args.measure)
    reference = _match_reference(spec, args.reference)
    reach = max([args.tmax or 0.0] + [b for _, b in args.intervals] + [h.right for h in args.hats])
    if reach <= 0:
        raise ValueError("converge needs --tmax, --intervals or --hats")
    report = run_ladder(spec, args.Ts, reach, args.intervals, args.hats, reference=reference, c=args.c)
    _emit(report.to_csv(), args.out)
    summary = report.to_json() + "\n"
    if args.summary:
        _emit(summary, args.summary)
    else:
        sys.stderr.write(summary)
    if args.svg:
        series = [(f"T = {e.T:.6g}", e.step.edges, e.step.values) for e in report.entries if e.step]
        curves = []
        if reference is not None and reference.h11 is not None:
            xs = np.linspace(0.0, reach, 400)
            curves.append(("reference h11", xs, reference.h11(xs)))
        _emit(svg.step_plot(series, title="h11 across the periodization ladder", ylabel="h11",
                            curves=curves), args.svg)
    failed = [e for e in report.entries if e.error]
    if failed:
        for e in failed:
            sys.stderr.write(f"T = {e.T:.17g}: {e.error}\n")
        return EXIT_BREAKDOWN
    return EXIT_OK


def cmd_check_pw(args):
    spec = load_measure(args.measure)
    validation = validate_even_positive(spec, args.range)
    diag = pw_diagnostic(spec, args.range, args.delta, args.window)
    elig = eligibility(spec)
    payload = {
        "label": diag.label,
        "validation": {"passed": validation.passed, "messages": validation.messages,
                       "evenness_residual": validation.evenness_residual},
        "sup_unit_mass": diag.sup_unit_mass,
        "delta": diag.delta,
        "window": diag.window,
        "windows": [{"start": s, "count": c, "window_is_interval": w}
                    for s, c, w in zip(diag.window_starts, diag.interval_counts, diag.window_is_interval)],
        "min_count_per_length": diag.min_count_density,
        "eligibility": {"class": elig.label, "c": elig.c, "c_free": elig.c_free, "notes": elig.notes},
    }
    _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", args.out)
    return EXIT_OK if validation.passed else EXIT_INVALID


def cmd_selftest(args):
    ok = True
    for name, passed, detail in run_selftest():
        print(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")
        ok &= passed
    return EXIT_OK if ok else EXIT_BREAKDOWN


COMMANDS = {
    "moments": cmd_moments,
    "recover": cmd_recover,
    "kernel": cmd_kernel,
    "opuc": cmd_opuc,
    "converge": cmd_converge,
    "check-pw": cmd_check_pw,
    "selftest": cmd_selftest,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code = COMMANDS[args.command](args)
    except (ToeplitzBreakdown, QuadratureError) as exc:
        sys.stderr.write(f"numerical breakdown: {exc}\n")
        return EXIT_BREAKDOWN
    except (MeasureError, ExprSyntaxError, EvaluationError, ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INVALID
    return EXIT_OK if code is None else code


if __name__ == "__main__":
    sys.exit(main())
