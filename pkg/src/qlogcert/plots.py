"""Figure rendering for report output paths.

Uses the Agg backend so rendering works headless; figures land next to
the delimited output file with a .png suffix.
"""
from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

_VERDICT_COLORS = {
    "CERTIFIED": "#2a9d8f",
    "VIOLATION": "#e63946",
    "HYPOTHESIS_UNMET": "#e9c46a",
    "INDETERMINATE": "#8d99ae",
}


def _as_float(v) -> float:
    if isinstance(v, Fraction):
        return v.numerator / v.denominator
    return float(v)


def save_bounds_figure(rows, path: str | Path, title: str) -> Path:
    """Plot lower/reference/upper columns over the x grid.

    Rows follow the bounds table layout; missing sides (empty strings or
    None) are skipped, flagged rows are dropped.
    """
    xs, lows, refs, ups = [], [], [], []
    for row in rows:
        x, lo, ref, up = row[0], row[1], row[2], row[3]
        flag = row[6] if len(row) > 6 else ""
        if flag:
            continue
        xs.append(_as_float(x))
        lows.append(None if lo in (None, "") else _as_float(lo))
        refs.append(None if ref in (None, "") else _as_float(ref))
        ups.append(None if up in (None, "") else _as_float(up))
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    if any(v is not None for v in lows):
        ax.plot(xs, [v for v in lows], "-", color="#457b9d", label="lower")
    if any(v is not None for v in refs):
        ax.plot(xs, [v for v in refs], "-", color="#1d3557", lw=2, label="reference")
    if any(v is not None for v in ups):
        ax.plot(xs, [v for v in ups], "-", color="#e63946", label="upper")
    ax.set_xlabel("x")
    ax.set_title(title)
    ax.legend(loc="best")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    out = Path(path)
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out


def save_verify_figure(report, path: str | Path) -> Path:
    """Scatter the verification grid in the (mu, nu) plane, one marker
    per point colored by verdict."""
    fig, ax = plt.subplots(figsize=(6.0, 5.0))
    seen = []
    for p in report.points:
        color = _VERDICT_COLORS.get(p.verdict, "#000000")
        label = p.verdict if p.verdict not in seen else None
        if label:
            seen.append(p.verdict)
        ax.scatter(
            [_as_float(p.mu)], [_as_float(p.nu)],
            c=color, s=60, label=label,
            marker="o" if p.exact else "s",
        )
    ax.set_xlabel("mu")
    ax.set_ylabel("nu")
    ax.set_title(
        f"{report.theorem.value} ({report.family}) a={report.a} c={report.c}"
    )
    ax.legend(loc="best")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    out = Path(path)
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out
