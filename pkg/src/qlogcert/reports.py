"""Serialization of certification reports and bound tables to JSON and
CSV, plus the exact rational parsing shared with the command line.

All rationals cross the text boundary as "p/q" (or "p") strings so
exactness survives round trips; floating values are printed with 25
significant digits.
"""
from __future__ import annotations

import csv
import io
import json
from fractions import Fraction

import mpmath

from .qlog_verifier import CertificationReport

SCHEMA_VERSION = 1
FLOAT_DIGITS = 25


def parse_rational(text: str) -> Fraction:
    """Parse "p/q", integer, or decimal literals into an exact Fraction."""
    text = text.strip()
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"cannot parse {text!r} as a rational") from exc


def fraction_str(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def format_value(v, digits: int = FLOAT_DIGITS) -> str:
    """Uniform text form: exact "p/q" for rationals, fixed-digit floats
    otherwise, empty string for None."""
    if v is None:
        return ""
    if isinstance(v, Fraction):
        return fraction_str(v)
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, str):
        return v
    return mpmath.nstr(v, digits, strip_zeros=True)


def _point_dict(p) -> dict:
    out = {
        "mu": fraction_str(p.mu),
        "nu": fraction_str(p.nu),
        "verdict": p.verdict,
        "exact": p.exact,
    }
    if p.violation_index is not None:
        out["violation_index"] = p.violation_index
        out["violation_coefficient"] = format_value(p.violation_coefficient)
    if p.indeterminate_indices:
        out["indeterminate_indices"] = list(p.indeterminate_indices)
    if p.strict is not None:
        out["strict"] = p.strict
    if p.reason is not None:
        out["reason"] = p.reason
    return out


def report_to_json(report: CertificationReport, timestamp: str | None = None) -> str:
    """Versioned JSON document for a certification report; the timestamp
    field is omitted entirely when None so output stays byte-stable."""
    doc = {
        "schema": SCHEMA_VERSION,
        "theorem": report.theorem.value,
        "family": report.family,
        "params": {
            "a": fraction_str(report.a),
            "c": fraction_str(report.c),
            "sequence": report.sequence,
        },
        "order": report.order,
        "precision": report.precision,
        "overall": report.overall_verdict(),
        "points": [_point_dict(p) for p in report.points],
    }
    if timestamp is not None:
        doc["timestamp"] = timestamp
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


REPORT_CSV_HEADER = (
    "theorem", "family", "a", "c", "order", "mu", "nu",
    "verdict", "exact", "violation_index", "violation_coefficient",
    "strict", "reason",
)


def report_to_csv(report: CertificationReport) -> str:
    """One CSV row per grid point, with a header row."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(REPORT_CSV_HEADER)
    for p in report.points:
        writer.writerow(
            [
                report.theorem.value,
                report.family,
                fraction_str(report.a),
                fraction_str(report.c),
                report.order,
                fraction_str(p.mu),
                fraction_str(p.nu),
                p.verdict,
                "exact" if p.exact else "interval",
                "" if p.violation_index is None else p.violation_index,
                format_value(p.violation_coefficient),
                "" if p.strict is None else format_value(p.strict),
                p.reason or "",
            ]
        )
    return buf.getvalue()


BOUNDS_CSV_HEADER = (
    "x", "lower", "reference", "upper", "margin_low", "margin_high", "flag"
)


def bounds_rows_to_csv(rows) -> str:
    """Serialize (x, lower, reference, upper, margin_low, margin_high,
    flag) tuples with a header row."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(BOUNDS_CSV_HEADER)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buf.getvalue()


def bounds_rows_to_json(rows, timestamp: str | None = None) -> str:
    doc = {
        "schema": SCHEMA_VERSION,
        "rows": [
            {key: format_value(v) for key, v in zip(BOUNDS_CSV_HEADER, row)}
            for row in rows
        ],
    }
    if timestamp is not None:
        doc["timestamp"] = timestamp
    return json.dumps(doc, indent=2) + "\n"
