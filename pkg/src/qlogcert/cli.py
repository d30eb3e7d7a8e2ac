"""Command line interface.

Three subcommands: ``verify`` certifies or explores coefficient-sign
claims over a shift grid, ``bounds`` tabulates closed-form brackets over
an x grid, and ``identity`` checks exact series identities.

Exit codes: 0 full success (all points certified, all brackets emitted,
residual zero), 2 a sign violation or nonzero residual, 3 inconclusive
(hypotheses unmet or interval straddles only), 1 usage, parameter, or
pole errors.  Rationals are written "p/q"; grids accept single values,
inclusive integer ranges "0..3", and inclusive progressions
"start:stop:step".  Output is deterministic; the JSON timestamp is
suppressed with --no-timestamp.  When --output is given, a rendered
figure lands next to the file (suppress with --no-plot).
"""
from __future__ import annotations

import argparse
import datetime
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import mpmath

from . import bounds as bounds_mod
from . import hyper_eval, plots, reports
from .errors import (
    DivergentArgument,
    DomainError,
    HypothesisUnmet,
    NonPositiveParameter,
    PoleParameter,
    QlogcertError,
    ZeroDenominator,
)
from .families import CoefficientSequence, FamilySpec
from .qlog_verifier import (
    CERTIFIED,
    VIOLATION,
    TheoremId,
    check_gosper_antidifference,
    check_kummer_identity,
    explore_conjecture,
    verify_theorem,
)
from .reports import parse_rational

ENV_PRECISION = "QLOGCERT_PRECISION"
MIN_PRECISION = 64
DEFAULT_ORDER = 50

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VIOLATION = 2
EXIT_INCONCLUSIVE = 3

BOUND_OPS = (
    "turan1f1", "logderiv", "kummerenv", "gaussratio", "cf", "turanian", "ratio"
)
IDENTITY_OPS = ("kummer", "gosper", "contiguous1f1", "contiguous2f1")

_ROW_ERRORS = (
    DomainError,
    ZeroDenominator,
    DivergentArgument,
    PoleParameter,
    HypothesisUnmet,
    NonPositiveParameter,
    ValueError,
)


class _Parser(argparse.ArgumentParser):
    """Parser that reports usage problems with exit status 1, keeping 2
    reserved for sign violations."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def parse_grid(text: str) -> tuple[Fraction, ...]:
    """Parse a comma-separated grid specification.

    Tokens: a rational literal ("3/4", "0.5", "2"), an inclusive integer
    range "0..3", or an inclusive progression "start:stop:step" with
    exact rational arithmetic (so "0:5:0.1" yields 51 points).
    """
    values: list[Fraction] = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        if ".." in token:
            lo_s, hi_s = token.split("..", 1)
            lo, hi = int(lo_s), int(hi_s)
            if hi < lo:
                raise ValueError(f"empty range {token!r}")
            values.extend(Fraction(k) for k in range(lo, hi + 1))
        elif token.count(":") == 2:
            start_s, stop_s, step_s = token.split(":")
            start = parse_rational(start_s)
            stop = parse_rational(stop_s)
            step = parse_rational(step_s)
            if step <= 0:
                raise ValueError(f"step must be positive in {token!r}")
            v = start
            while v <= stop:
                values.append(v)
                v += step
        else:
            values.append(parse_rational(token))
    if not values:
        raise ValueError(f"grid {text!r} is empty")
    return tuple(values)


def parse_sequence(text: str) -> CoefficientSequence:
    """Parse a --seq specification.

    Forms: "ones"; "pochhammer:B"; "hyper:n1,n2;d1,d2" (semicolon splits
    numerator from denominator parameters, so "p/q" literals stay
    unambiguous); "explicit:v1,v2,...".
    """
    if text == "ones":
        return CoefficientSequence.ones()
    head, sep, rest = text.partition(":")
    if not sep or not rest:
        raise ValueError(f"unknown sequence spec {text!r}")
    if head == "pochhammer":
        return CoefficientSequence.pochhammer(parse_rational(rest))
    if head == "hyper":
        num_s, _, den_s = rest.partition(";")
        nums = tuple(parse_rational(t) for t in num_s.split(",") if t.strip())
        dens = tuple(parse_rational(t) for t in den_s.split(",") if t.strip())
        return CoefficientSequence.hyper_term(nums, dens)
    if head == "explicit":
        vals = tuple(parse_rational(t) for t in rest.split(",") if t.strip())
        return CoefficientSequence.explicit(vals)
    raise ValueError(f"unknown sequence spec {text!r}")


def _resolve_precision(args, fallback: int) -> int:
    if args.precision is not None:
        precision = args.precision
    else:
        env = os.environ.get(ENV_PRECISION)
        precision = int(env) if env else fallback
    if precision < MIN_PRECISION:
        raise ValueError(f"precision must be at least {MIN_PRECISION} bits")
    return precision


def _timestamp(args) -> str | None:
    if args.no_timestamp:
        return None
    return datetime.datetime.now(datetime.timezone.utc).isoformat(
        timespec="seconds"
    )


def _emit(args, text: str, figure=None) -> None:
    if args.output:
        out = Path(args.output)
        out.write_text(text)
        if figure is not None and not args.no_plot:
            figure(out.with_suffix(".png"))
    else:
        sys.stdout.write(text)


def _add_io_flags(p) -> None:
    p.add_argument("--precision", type=int, default=None,
                   help=f"working precision in bits (>= {MIN_PRECISION}; "
                        f"env {ENV_PRECISION} sets the default)")
    p.add_argument("--format", choices=("json", "csv"), default=None)
    p.add_argument("--output", default=None, metavar="PATH",
                   help="write the report here instead of stdout")
    p.add_argument("--no-plot", action="store_true",
                   help="skip the figure rendered next to --output")
    p.add_argument("--no-timestamp", action="store_true",
                   help="omit the timestamp field for byte-stable output")


def build_parser() -> _Parser:
    parser = _Parser(
        prog="qlogcert",
        description="Certify coefficient signs, tabulate bounds, and "
                    "check series identities for gamma-ratio families.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pv = sub.add_parser("verify", help="certify a sign claim over a shift grid")
    which = pv.add_mutually_exclusive_group(required=True)
    which.add_argument("--theorem", help="claim id (T1..T6)")
    which.add_argument("--conjecture", help="conjecture id (C1, C2)")
    pv.add_argument("--family", choices=("F", "G", "H", "Q"), default=None,
                    help="family letter; defaults to the claim's family")
    pv.add_argument("--a", type=parse_rational, required=True)
    pv.add_argument("--c", type=parse_rational, required=True)
    pv.add_argument("--mu", type=parse_grid, default=None,
                    help='first shift grid (default "0..3")')
    pv.add_argument("--nu", type=parse_grid, default=None,
                    help='second shift grid (default "1..2")')
    pv.add_argument("--alpha", type=parse_grid, default=None,
                    help="conjecture alias for --mu")
    pv.add_argument("--beta", type=parse_grid, default=None,
                    help="conjecture alias for --nu")
    pv.add_argument("--order", type=int, default=DEFAULT_ORDER,
                    help=f"truncation order (default {DEFAULT_ORDER})")
    pv.add_argument("--seq", type=parse_sequence,
                    default=CoefficientSequence.ones(),
                    help="coefficient sequence: ones | pochhammer:B | "
                         "hyper:n1,n2;d1,d2 | explicit:v1,v2,...")
    _add_io_flags(pv)

    pb = sub.add_parser("bounds", help="tabulate a bound bracket over an x grid")
    pb.add_argument("op", choices=BOUND_OPS)
    pb.add_argument("--a", type=parse_rational, required=True)
    pb.add_argument("--c", type=parse_rational, required=True)
    pb.add_argument("--b", type=parse_rational, default=None,
                    help="second numerator parameter (gaussratio, cf)")
    pb.add_argument("--x", type=parse_grid, required=True)
    pb.add_argument("--kind", choices=("F", "G", "H"), default="F",
                    help="family kind (turanian, ratio)")
    pb.add_argument("--mu", type=parse_rational, default=None,
                    help="shift (ratio)")
    pb.add_argument("--nu", type=int, default=1,
                    help="shift order (turanian, ratio)")
    pb.add_argument("--seq", type=parse_sequence, default=None,
                    help="coefficient sequence (turanian)")
    pb.add_argument("--depth", type=int, default=30,
                    help="continued fraction depth (cf)")
    pb.add_argument("--tail", choices=("FULL_EULER", "PERIODIC_FROM"),
                    default="FULL_EULER", help="tail model (cf)")
    pb.add_argument("--tail-start", type=int, default=0,
                    help="index where the periodic tail begins (cf)")
    _add_io_flags(pb)

    pi = sub.add_parser("identity", help="check an exact series identity")
    pi.add_argument("op", choices=IDENTITY_OPS)
    pi.add_argument("--a", type=parse_rational, required=True)
    pi.add_argument("--b", type=parse_rational, default=None,
                    help="second parameter (gosper, contiguous2f1)")
    pi.add_argument("--c", type=parse_rational, default=None,
                    help="denominator parameter (kummer, contiguous*)")
    pi.add_argument("--mu", type=parse_rational, default=Fraction(0),
                    help="shift (kummer, gosper)")
    pi.add_argument("--m", type=int, default=None,
                    help="summation length (gosper)")
    pi.add_argument("--x", type=parse_rational, default=None,
                    help="evaluation point (contiguous*)")
    pi.add_argument("--order", type=int, default=DEFAULT_ORDER)
    _add_io_flags(pi)

    return parser


def cmd_verify(args) -> int:
    claim = TheoremId.from_string(args.theorem or args.conjecture)
    precision = _resolve_precision(args, 256)
    if args.order < 1:
        raise ValueError("order must be at least 1")
    mu_grid = args.alpha or args.mu or parse_grid("0..3")
    nu_grid = args.beta or args.nu or parse_grid("1..2")
    spec = FamilySpec(
        family=args.family or claim.family, a=args.a, c=args.c, sequence=args.seq
    )
    grid = [(mu, nu) for mu in mu_grid for nu in nu_grid]
    if claim.is_conjecture:
        report = explore_conjecture(claim, spec, grid, args.order, precision)
    else:
        report = verify_theorem(claim, spec, grid, args.order, precision)

    if (args.format or "json") == "json":
        text = reports.report_to_json(report, _timestamp(args))
    else:
        text = reports.report_to_csv(report)
    _emit(args, text, figure=lambda p: plots.save_verify_figure(report, p))

    overall = report.overall_verdict()
    if overall == CERTIFIED:
        return EXIT_OK
    if overall == VIOLATION:
        return EXIT_VIOLATION
    return EXIT_INCONCLUSIVE


def _ctx_value(ctx, v):
    if isinstance(v, Fraction):
        return ctx.mpf(v.numerator) / ctx.mpf(v.denominator)
    return ctx.mpf(v)


def _require(args, names: Sequence[str]) -> None:
    for name in names:
        if getattr(args, name) is None:
            raise ValueError(f"--{name} is required for this operation")


def _bounds_triple(args, x, precision: int):
    """Return (lower, reference, upper) for one grid point; one side may
    be None for one-sided operations."""
    op, a, c = args.op, args.a, args.c
    if op == "turan1f1":
        t = bounds_mod.turan_1f1(a, c, x, precision)
        return t.lower, t.reference, t.upper
    if op == "logderiv":
        lower, upper = bounds_mod.logderiv_envelope(a, c, x, precision)
        ref = hyper_eval.kummer_log_derivative(a, c, x, precision)
        return lower, ref, upper
    if op == "kummerenv":
        b1, b2, orientation = bounds_mod.kummer_envelope(a, c, x, precision)
        ref = hyper_eval.pfq_values([a], [c], x, precision)
        if orientation == "B1_LOWER":
            return b1, ref, b2
        return b2, ref, b1
    if op == "gaussratio":
        _require(args, ["b"])
        bound, direction = bounds_mod.gauss_ratio_bound(a, args.b, c, x, precision)
        ref = bounds_mod.gauss_ratio_direct(a, args.b, c, x, precision)
        if direction == bounds_mod.UPPER:
            return None, ref, bound
        if direction == bounds_mod.LOWER:
            return bound, ref, None
        return bound, ref, bound
    if op == "cf":
        _require(args, ["b"])
        cf = bounds_mod.CFSpec(
            a=a, b=args.b, c=c, x=x, tail=args.tail, tail_start=args.tail_start
        )
        value = bounds_mod.continued_fraction_eval(cf, args.depth, precision)
        ref = bounds_mod.gauss_ratio_direct(a, args.b, c, x, precision)
        if value <= ref:
            return value, ref, None
        return None, ref, value
    if op == "turanian":
        t = bounds_mod.turanian_two_sided(
            args.kind, a, c, args.nu, x, sequence=args.seq,
            precision_bits=precision,
        )
        return t.lower, t.reference, t.upper
    if op == "ratio":
        mu = args.mu if args.mu is not None else Fraction(1)
        lower, ratio, upper = bounds_mod.ratio_two_sided(
            args.kind, a, c, mu, args.nu, x, precision
        )
        return lower, ratio, upper
    raise ValueError(f"unknown bounds operation {op!r}")


def _one_bounds_row(args, x, precision: int):
    try:
        lower, ref, upper = _bounds_triple(args, x, precision)
    except _ROW_ERRORS as exc:
        return (x, "nan", "nan", "nan", "", "",
                f"{type(exc).__name__}: {exc}")
    ctx = mpmath.mp.clone()
    ctx.prec = precision + 16
    rv = _ctx_value(ctx, ref)
    m_lo = "" if lower is None else ctx.fsub(rv, _ctx_value(ctx, lower))
    m_hi = "" if upper is None else ctx.fsub(_ctx_value(ctx, upper), rv)
    return (x, lower, ref, upper, m_lo, m_hi, "")


def cmd_bounds(args) -> int:
    precision = _resolve_precision(args, 128)
    xs = args.x
    workers = min(8, len(xs))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda x: _one_bounds_row(args, x, precision), xs))
    else:
        rows = [_one_bounds_row(args, x, precision) for x in xs]

    if (args.format or "csv") == "csv":
        text = reports.bounds_rows_to_csv(rows)
    else:
        text = reports.bounds_rows_to_json(rows, _timestamp(args))
    title = f"{args.op} a={args.a} c={args.c}"
    _emit(args, text, figure=lambda p: plots.save_bounds_figure(rows, p, title))
    return EXIT_OK


def cmd_identity(args) -> int:
    precision = _resolve_precision(args, 128)
    op = args.op
    doc = {"schema": reports.SCHEMA_VERSION, "identity": op}
    if op == "kummer":
        _require(args, ["c"])
        residual = check_kummer_identity(args.a, args.c, args.mu, args.order)
        ok = residual.is_zero()
        doc["order"] = args.order
        doc["residual_zero"] = ok
        if not ok:
            first = next(
                (n, q) for n, q in enumerate(residual.coeffs) if q != 0
            )
            doc["first_nonzero"] = {
                "index": first[0], "value": reports.fraction_str(first[1])
            }
        line = (f"kummer residual through order {args.order}: "
                f"{'zero' if ok else 'NONZERO'}\n")
    elif op == "gosper":
        _require(args, ["b", "m"])
        ok = check_gosper_antidifference(args.a, args.b, args.mu, args.m)
        doc["m"] = args.m
        doc["telescopes"] = ok
        line = (f"gosper antidifference for m={args.m}: "
                f"{'telescopes' if ok else 'FAILS'}\n")
    else:
        _require(args, ["c", "x"])
        threshold = mpmath.mpf(2) ** (-(precision - 28))
        if op == "contiguous1f1":
            r = hyper_eval.contiguous_residual_1f1(
                args.a, args.c, args.x, precision
            )
        else:
            _require(args, ["b"])
            r = hyper_eval.contiguous_residual_2f1(
                args.a, args.b, args.c, args.x, precision
            )
        ok = r <= threshold
        doc["residual"] = reports.format_value(r)
        doc["threshold"] = reports.format_value(threshold)
        doc["below_threshold"] = ok
        line = (f"{op} residual {reports.format_value(r, 6)} "
                f"{'<=' if ok else '>'} threshold "
                f"{reports.format_value(threshold, 6)}\n")

    doc["pass"] = ok
    if (args.format or "text") == "json":
        text = json.dumps(doc, indent=2) + "\n"
    else:
        text = line
    _emit(args, text, figure=None)
    return EXIT_OK if ok else EXIT_VIOLATION


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point; returns the process exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits on usage errors and --help; fold both into a
        # returned status so in-process callers never unwind.
        return int(exc.code or 0)
    try:
        if args.command == "verify":
            return cmd_verify(args)
        if args.command == "bounds":
            return cmd_bounds(args)
        return cmd_identity(args)
    except QlogcertError as exc:
        print(f"qlogcert: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (ValueError, ZeroDivisionError, OverflowError) as exc:
        print(f"qlogcert: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
