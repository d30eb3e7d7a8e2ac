"""Sign certification for the product differences of the four families,
conjecture exploration with interval guards, and the exact identity checks
(Kummer-type product identity, binomial-sum antidifference) that back the
discrete cases.

A verification run is grid-plus-order bounded and the report says exactly
that: CERTIFIED means every coefficient through the stated order has the
expected sign at that grid point, nothing more. Hypothesis checking is
eager, so a point outside a theorem's hypotheses is reported as
HYPOTHESIS_UNMET rather than silently explored.
"""
from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from . import families
from .errors import PoleParameter
from .families import FamilySpec, IntervalSeries, PrefactoredSeries
from .fps import TruncatedSeries, cauchy_product, subtract
from .rational_core import binomial, rising_factorial

CERTIFIED = "CERTIFIED"
VIOLATION = "VIOLATION"
HYPOTHESIS_UNMET = "HYPOTHESIS_UNMET"
INDETERMINATE = "INDETERMINATE"

DEFAULT_EXPLORE_PRECISION = 256


class TheoremId(enum.Enum):
    """Identifiers binding an expected coefficient sign and a hypothesis
    predicate to one of the four families."""

    T1_F_CONCAVE = "T1"
    T2_F_CONVEX = "T2"
    T3_G_CONVEX = "T3"
    T4_G_CONCAVE = "T4"
    T5_H_CONCAVE = "T5"
    T6_Q_CONVEX = "T6"
    C1_CONJ = "C1"
    C2_CONJ = "C2"

    @property
    def family(self) -> str:
        return {
            "T1": "F", "T2": "F", "C1": "F",
            "T3": "G", "T4": "G", "C2": "G",
            "T5": "H", "T6": "Q",
        }[self.value]

    @property
    def expected_sign(self) -> int:
        return {
            "T1": 1, "T2": -1, "T3": -1, "T4": 1,
            "T5": 1, "T6": -1, "C1": 1, "C2": 1,
        }[self.value]

    @property
    def is_conjecture(self) -> bool:
        return self.value in ("C1", "C2")

    @classmethod
    def from_string(cls, label: str) -> "TheoremId":
        label = label.strip().upper()
        for member in cls:
            if member.value == label or member.name == label:
                return member
        raise ValueError(f"unknown theorem id {label!r}")


@dataclass(frozen=True)
class PointResult:
    """Verdict for one (mu, nu) grid point."""

    mu: Fraction
    nu: Fraction
    verdict: str
    exact: bool
    violation_index: int | None = None
    violation_coefficient: object = None
    indeterminate_indices: tuple[int, ...] = ()
    strict: bool | None = None
    reason: str | None = None


@dataclass(frozen=True)
class CertificationReport:
    """Per-point verdicts for a theorem or conjecture over a shift grid.

    The report's scope is exactly the grid and the truncation order it
    names; no claim extends beyond the checked coefficients.
    """

    theorem: TheoremId
    family: str
    a: Fraction
    c: Fraction
    sequence: str
    order: int
    points: tuple[PointResult, ...]
    precision: int | None = None

    def overall_verdict(self) -> str:
        verdicts = {p.verdict for p in self.points}
        if VIOLATION in verdicts:
            return VIOLATION
        if HYPOTHESIS_UNMET in verdicts:
            return HYPOTHESIS_UNMET
        if INDETERMINATE in verdicts:
            return INDETERMINATE
        return CERTIFIED

    def all_certified(self) -> bool:
        return all(p.verdict == CERTIFIED for p in self.points)


def _rat(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _is_nonneg_integer(x: Fraction) -> bool:
    return x.denominator == 1 and x >= 0


def _discrete_pair_ok(mu: Fraction, nu: Fraction) -> bool:
    # Symmetric discrete hypothesis: one shift a nonnegative integer, the
    # other at least that integer minus one.
    return (_is_nonneg_integer(nu) and mu >= nu - 1) or (
        _is_nonneg_integer(mu) and nu >= mu - 1
    )


def _sequence_reason(theorem: TheoremId, spec: FamilySpec, order: int) -> str | None:
    vals = spec.sequence.values(order)
    if any(v < 0 for v in vals):
        return "coefficient sequence must be nonnegative"
    key = theorem.value
    needs_strong = False
    if key in ("T1", "C1"):
        needs_strong = True
    elif key in ("T4", "C2"):
        needs_strong = spec.a > spec.c + 1
    elif key == "T5":
        needs_strong = spec.a < spec.c or spec.a > spec.c + 1
    if needs_strong:
        if not families.sequence_is_pf2(vals):
            return (
                "coefficient sequence must be positive somewhere with no "
                "internal zeros"
            )
        if not families.sequence_is_log_concave(vals):
            return "coefficient sequence must be log-concave"
    return None


def _parameter_reason(theorem: TheoremId, spec: FamilySpec) -> str | None:
    key = theorem.value
    if key in ("T1", "T3", "C1") and spec.c < spec.a:
        return f"requires c >= a, got a = {spec.a}, c = {spec.c}"
    if key in ("T2", "T4", "C2") and spec.a < spec.c:
        return f"requires a >= c, got a = {spec.a}, c = {spec.c}"
    return None


def _point_reason(theorem: TheoremId, mu: Fraction, nu: Fraction) -> str | None:
    if mu < 0 or nu < 0:
        return "shifts must be nonnegative"
    if theorem.value in ("T1", "T4", "T5") and not _discrete_pair_ok(mu, nu):
        return (
            "needs an integer shift pair: nu a nonnegative integer with "
            "mu >= nu - 1, or symmetrically"
        )
    return None


def _interval_sign(v) -> str:
    # mpmath interval comparisons return None on straddles, so classify by
    # the endpoints.
    lo, hi = v.a, v.b
    if lo > 0:
        return "POSITIVE"
    if hi < 0:
        return "NEGATIVE"
    if lo == 0 and hi == 0:
        return "ZERO"
    if lo == 0:
        return "NONNEGATIVE"
    if hi == 0:
        return "NONPOSITIVE"
    return "STRADDLES_ZERO"


def _classify_exact(
    body: TruncatedSeries, sign: int, mu: Fraction, nu: Fraction
) -> PointResult:
    for m, coeff in enumerate(body.coeffs):
        if coeff * sign < 0:
            return PointResult(
                mu, nu, VIOLATION, True,
                violation_index=m, violation_coefficient=coeff,
            )
    strict = all(coeff * sign > 0 for coeff in body.coeffs[1:])
    return PointResult(mu, nu, CERTIFIED, True, strict=strict)


def _classify_interval(
    body: IntervalSeries, sign: int, mu: Fraction, nu: Fraction
) -> PointResult:
    good = ("POSITIVE", "ZERO", "NONNEGATIVE") if sign > 0 else (
        "NEGATIVE", "ZERO", "NONPOSITIVE"
    )
    bad = "NEGATIVE" if sign > 0 else "POSITIVE"
    unresolved = []
    for m in range(body.order + 1):
        kind = _interval_sign(body.coeffs[m])
        if kind == bad:
            return PointResult(
                mu, nu, VIOLATION, False,
                violation_index=m,
                violation_coefficient=str(body.coeffs[m]),
            )
        if kind not in good:
            unresolved.append(m)
    if unresolved:
        return PointResult(
            mu, nu, INDETERMINATE, False,
            indeterminate_indices=tuple(unresolved),
        )
    return PointResult(mu, nu, CERTIFIED, False)


def _evaluate_point(
    theorem: TheoremId,
    spec: FamilySpec,
    mu: Fraction,
    nu: Fraction,
    order: int,
    precision: int,
) -> PointResult:
    reason = _point_reason(theorem, mu, nu)
    if reason is not None:
        return PointResult(mu, nu, HYPOTHESIS_UNMET, True, reason=reason)
    product = families.product_difference(
        spec, mu, nu, order, mode="auto", precision=precision
    )
    sign = theorem.expected_sign
    if product.exact:
        return _classify_exact(product.series, sign, mu, nu)
    return _classify_interval(product.series, sign, mu, nu)


def _run_grid(
    theorem: TheoremId,
    spec: FamilySpec,
    grid: Sequence[tuple],
    order: int,
    precision: int,
) -> CertificationReport:
    if spec.family != theorem.family:
        raise ValueError(
            f"{theorem.value} applies to the {theorem.family} family, "
            f"got {spec.family}"
        )
    pairs = sorted((_rat(m), _rat(n)) for m, n in grid)
    seq_reason = _sequence_reason(theorem, spec, order)
    param_reason = _parameter_reason(theorem, spec)
    blocked = param_reason or seq_reason
    if blocked is not None:
        points = tuple(
            PointResult(m, n, HYPOTHESIS_UNMET, True, reason=blocked)
            for m, n in pairs
        )
    else:
        with ThreadPoolExecutor(max_workers=min(8, max(1, len(pairs)))) as pool:
            futures = [
                pool.submit(_evaluate_point, theorem, spec, m, n, order, precision)
                for m, n in pairs
            ]
            points = tuple(f.result() for f in futures)
        points = tuple(sorted(points, key=lambda p: (p.mu, p.nu)))
    return CertificationReport(
        theorem, spec.family, spec.a, spec.c,
        spec.sequence.describe(), order, points,
        precision=precision,
    )


def verify_theorem(
    theorem: TheoremId,
    spec: FamilySpec,
    grid: Sequence[tuple],
    order: int,
    precision: int = DEFAULT_EXPLORE_PRECISION,
) -> CertificationReport:
    """Certify the coefficient signs of one theorem over a shift grid.

    Parameters
    ----------
    theorem : TheoremId
        One of T1..T6 (conjecture ids go through explore_conjecture).
    spec : FamilySpec
        Family instance; its family letter must match the theorem's.
    grid : sequence of (mu, nu)
        Rational shift pairs; hypothesis failures become per-point
        HYPOTHESIS_UNMET verdicts, never exceptions.
    order : int
        Truncation order M; all coefficients 0..M are checked.
    precision : int
        Interval precision in bits for points where the coupling constant
        is irrational.
    """
    if theorem.is_conjecture:
        raise ValueError("conjecture ids are handled by explore_conjecture")
    return _run_grid(theorem, spec, grid, order, precision)


def explore_conjecture(
    conjecture: TheoremId,
    spec: FamilySpec,
    grid: Sequence[tuple],
    order: int,
    float_precision: int = DEFAULT_EXPLORE_PRECISION,
) -> CertificationReport:
    """Explore a conjectured sign pattern on arbitrary nonnegative shift
    pairs, using exact arithmetic where available and interval enclosures
    elsewhere; interval straddles report INDETERMINATE, never a sign."""
    if not conjecture.is_conjecture:
        raise ValueError("theorem ids are handled by verify_theorem")
    return _run_grid(conjecture, spec, grid, order, float_precision)


def phi_first_coefficient(f0, f1, a, c, mu, nu) -> Fraction:
    """Closed form of coefficient 1 of the concave-side product difference
    for the ratio family: f0 f1 mu nu (c-a)(2c+mu+nu) /
    (c (c+mu)(c+nu)(c+mu+nu))."""
    f0, f1, a, c, mu, nu = map(_rat, (f0, f1, a, c, mu, nu))
    return (
        f0 * f1 * mu * nu * (c - a) * (2 * c + mu + nu)
        / (c * (c + mu) * (c + nu) * (c + mu + nu))
    )


def _pole_check(label: str, value: Fraction) -> None:
    if value.denominator == 1 and value <= 0:
        raise PoleParameter(f"{label} = {value} is a nonpositive integer")


def _kummer_series(a: Fraction, c: Fraction, order: int) -> TruncatedSeries:
    # Truncated 1F1(a; c; x): (a)_n / ((c)_n n!).
    coeffs = []
    ratio = Fraction(1)
    for n in range(order + 1):
        if n > 0:
            den = (c + n - 1) * n
            if c + n - 1 == 0:
                raise PoleParameter(f"1F1 denominator parameter {c} hits a pole")
            ratio *= (a + n - 1) / den
        coeffs.append(ratio)
    return TruncatedSeries(tuple(coeffs), order)


def check_kummer_identity(a, c, mu, order: int) -> TruncatedSeries:
    """Exact residual of the product identity

    1F1(a+mu;c+mu;x) 1F1(a+1;c+1;x) - 1F1(a+mu+1;c+mu+1;x) 1F1(a;c;x)
      = (c-a) x / (c(c+1)(c+mu)(c+mu+1)) *
        [ (c+mu)(c+mu+1) 1F1(a+1;c+2;x) 1F1(a+mu+1;c+mu+1;x)
          - c(c+1) 1F1(a+1;c+1;x) 1F1(a+mu+1;c+mu+2;x) ]

    expanded through ``order``. The contract is an identically zero series.
    """
    a, c, mu = map(_rat, (a, c, mu))
    _pole_check("c", c)
    _pole_check("c + mu", c + mu)
    lhs = subtract(
        cauchy_product(
            _kummer_series(a + mu, c + mu, order), _kummer_series(a + 1, c + 1, order)
        ),
        cauchy_product(
            _kummer_series(a + mu + 1, c + mu + 1, order), _kummer_series(a, c, order)
        ),
    )
    bracket = subtract(
        cauchy_product(
            _kummer_series(a + 1, c + 2, order),
            _kummer_series(a + mu + 1, c + mu + 1, order),
        ).scale((c + mu) * (c + mu + 1)),
        cauchy_product(
            _kummer_series(a + 1, c + 1, order),
            _kummer_series(a + mu + 1, c + mu + 2, order),
        ).scale(c * (c + 1)),
    )
    factor = (c - a) / (c * (c + 1) * (c + mu) * (c + mu + 1))
    # Multiply the bracket by factor * x: shift coefficients up by one.
    rhs_coeffs = (Fraction(0),) + tuple(
        factor * bracket.coeffs[m] for m in range(order)
    )
    rhs = TruncatedSeries(rhs_coeffs, order)
    return subtract(lhs, rhs)


def absum_value(a, b, mu, m: int) -> Fraction:
    """Exact value of the binomial sum

    sum_{k=0}^{m} (a)_k (a+mu)_{m-k} / ((b)_k (b+mu)_{m-k})
                  * binom(m,k) (m - 2k + mu).

    Requires b > 0 and b + mu > 0 so no denominator vanishes.
    """
    a, b, mu = map(_rat, (a, b, mu))
    if m < 1:
        raise ValueError("the sum is defined for m >= 1")
    if b <= 0 or b + mu <= 0:
        raise ValueError("need b > 0 and b + mu > 0")
    total = Fraction(0)
    for k in range(m + 1):
        term = (
            rising_factorial(a, k)
            * rising_factorial(a + mu, m - k)
            / (rising_factorial(b, k) * rising_factorial(b + mu, m - k))
        )
        total += term * binomial(m, k) * (m - 2 * k + mu)
    return total


def _alpha_term(a: Fraction, b: Fraction, mu: Fraction, m: int, k: int) -> Fraction:
    # alpha_k = (b-1)(b-1+mu) (a)_k (a+mu)_{m+1-k}
    #           / ((a-b+1) (b-1)_k (b-1+mu)_{m+1-k})
    # written with the leading factors cancelled so b = 1 and mu = 0 stay
    # finite: (b-1)/(b-1)_k = 1/(b)_{k-1} for k >= 1, and likewise in mu.
    out = rising_factorial(a, k) * rising_factorial(a + mu, m + 1 - k) / (a - b + 1)
    if k == 0:
        out *= b - 1
    else:
        out /= rising_factorial(b, k - 1)
    if k == m + 1:
        out *= b - 1 + mu
    else:
        out /= rising_factorial(b + mu, m - k)
    return out


def check_gosper_antidifference(a, b, mu, m: int) -> bool:
    """Verify exactly that u_k (m - 2k + mu) telescopes as
    alpha_{k+1} - alpha_k for k = 0..m, where
    u_k = (a)_k (a+mu)_{m-k} / ((b)_k (b+mu)_{m-k}) and alpha is the
    certificate from the antidifference construction.

    Raises PoleParameter when a - b + 1 = 0, where the certificate is
    undefined.
    """
    a, b, mu = map(_rat, (a, b, mu))
    if m < 1:
        raise ValueError("the telescoping check needs m >= 1")
    if a - b + 1 == 0:
        raise PoleParameter(
            "certificate denominator a - b + 1 vanishes at a = b - 1"
        )
    if b <= 0 or b + mu <= 0:
        raise ValueError("need b > 0 and b + mu > 0")
    for k in range(m + 1):
        u_k = (
            rising_factorial(a, k)
            * rising_factorial(a + mu, m - k)
            / (rising_factorial(b, k) * rising_factorial(b + mu, m - k))
        )
        lhs = u_k * (m - 2 * k + mu)
        rhs = _alpha_term(a, b, mu, m, k + 1) - _alpha_term(a, b, mu, m, k)
        if lhs != rhs:
            return False
    return True


def check_multiplicative_convexity(
    series_values: Callable,
    x: float,
    y: float,
    lambdas: Sequence[float],
    tol: float = 1e-12,
) -> bool:
    """Check v(x^t y^(1-t)) <= v(x)^t v(y)^(1-t) on a grid of t values.

    ``series_values`` must evaluate a certified nonnegative series; the
    comparison allows relative slack ``tol``.
    """
    if not (x > 0 and y > 0):
        raise ValueError("multiplicative convexity needs positive abscissas")
    vx, vy = series_values(x), series_values(y)
    if vx < 0 or vy < 0:
        raise ValueError("series values must be nonnegative")
    for lam in lambdas:
        if not 0 <= lam <= 1:
            raise ValueError("lambda grid must lie in [0, 1]")
        point = (x ** lam) * (y ** (1 - lam))
        lhs = series_values(point)
        rhs = (vx ** lam) * (vy ** (1 - lam))
        if lhs > rhs + tol * max(abs(rhs), 1e-300):
            return False
    return True


def check_reciprocal_log_convexity(
    series_values: Callable,
    y_grid: Sequence[float],
    tol: float = 1e-12,
) -> bool:
    """Midpoint log-convexity of y -> |series(1/y)| on a positive grid.

    For every pair y_i < y_j the check is |v(m)|^2 <= |v(y_i)| |v(y_j)|
    with m the midpoint. An identically zero sample is vacuously convex.
    """
    ys = sorted(float(y) for y in y_grid)
    if any(y <= 0 for y in ys):
        raise ValueError("the grid must be strictly positive")
    vals = {y: abs(series_values(1.0 / y)) for y in ys}
    if all(v == 0 for v in vals.values()):
        return True
    for i in range(len(ys)):
        for j in range(i + 1, len(ys)):
            mid = (ys[i] + ys[j]) / 2
            vm = abs(series_values(1.0 / mid))
            bound = vals[ys[i]] * vals[ys[j]]
            if vm * vm > bound + tol * max(abs(bound), 1e-300):
                return False
    return True
