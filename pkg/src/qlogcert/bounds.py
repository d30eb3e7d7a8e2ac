"""Closed-form bound evaluators: Turanian brackets, logarithmic-derivative
envelopes and their integrated exponential envelopes, the quadratic ratio
bound for the Gauss function, the Euler continued fraction with optional
periodic tail closure, and the two-sided Pochhammer ratio estimates.

Every evaluator returns the bound(s) together with a directly evaluated
reference value so bracketing can be asserted. The long radical formulas
are each written exactly once, in the named helpers collected in FORMULAS;
the public operations only branch and assemble.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .errors import (
    DomainError,
    HypothesisUnmet,
    NonPositiveParameter,
    ZeroDenominator,
)
from .families import (
    CoefficientSequence,
    FamilySpec,
    core_coefficients,
    sequence_is_log_concave,
    sequence_is_pf2,
)
from .hyper_eval import DEFAULT_PRECISION, HyperParams, pfq
from .rational_core import rising_factorial

UPPER = "UPPER"
LOWER = "LOWER"
EQUAL = "EQUAL"


def _rat(v) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)


def _ctx(bits: int):
    ctx = mpmath.mp.clone()
    ctx.prec = bits
    return ctx


def _mp(ctx, v):
    if isinstance(v, Fraction):
        return ctx.mpf(v.numerator) / ctx.mpf(v.denominator)
    return ctx.mpf(v)


@dataclass(frozen=True)
class BoundTriple:
    """A lower bound, a directly evaluated reference, and an upper bound at
    one abscissa, with tags naming the producing formulas."""

    lower: object
    reference: object
    upper: object
    x: object
    tags: tuple[str, str, str]

    def brackets(self, tol=0) -> bool:
        lo, mid, hi = (exact_fraction(v) for v in (self.lower, self.reference, self.upper))
        slack = exact_fraction(tol)
        return lo <= mid + slack and mid <= hi + slack


def exact_fraction(v) -> Fraction:
    """Exact rational value of a Fraction, int, float, or finite mpf.

    mpf values are binary rationals sign * mantissa * 2^exponent, so the
    conversion is lossless and comparisons through it are exact.
    """
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, float):
        return Fraction(v)
    sign, man, exp, _ = v._mpf_
    if man == 0:
        if exp == 0:
            return Fraction(0)
        raise ValueError("cannot represent a nonfinite value exactly")
    out = Fraction(man) * Fraction(2) ** exp
    return -out if sign else out


def family_value(spec: FamilySpec, mu, x, precision_bits: int = DEFAULT_PRECISION):
    """Numeric value of the family series at shift mu and abscissa x,
    prefactor included."""
    mu = _rat(mu)
    ctx = _ctx(precision_bits + 16)
    seq = spec.sequence
    am, cm = spec.a + mu, spec.c + mu
    if seq.kind == "ones":
        core = pfq(HyperParams((am,), (cm,), x), precision_bits + 16).value
    elif seq.kind == "pochhammer":
        core = pfq(
            HyperParams((am, seq.params[0]), (cm,), x), precision_bits + 16
        ).value
    elif seq.kind == "hyper_term":
        nums, dens = seq.params
        core = pfq(
            HyperParams((am,) + nums, (cm,) + dens, x), precision_bits + 16
        ).value
    else:
        horizon = seq.horizon - 1
        coeffs = core_coefficients(spec, mu, horizon)
        xv = _mp(ctx, x)
        core = ctx.mpf(0)
        for cn in reversed(coeffs):
            core = core * xv + _mp(ctx, cn)
    pref = spec.prefactor(mu).evaluate(ctx)
    out = _ctx(precision_bits)
    return out.mpf(pref * core)


def _f1f1(a, c, x, bits):
    return pfq(HyperParams((_rat(a),), (_rat(c),), x), bits).value


def turan_1f1(a, c, x, precision_bits: int = DEFAULT_PRECISION) -> BoundTriple:
    """Two-sided bracket for the confluent Turanian at one abscissa.

    For c >= a > 0 the reference is 1F1(a+1;c+1;x)^2 -
    1F1(a;c;x) 1F1(a+2;c+2;x) with bounds 2x(c-a)/(c(c+1)(c+2)) and
    (c-a)/(c(a+1)) 1F1(a+1;c+1;x)^2. For a >= c > 0 the reference is the
    weighted form (a/c) 1F1(a+1;c+1;x)^2 -
    ((a+1)/(c+1)) 1F1(a;c;x) 1F1(a+2;c+2;x) with constant lower bound
    (a-c)/(c(c+1)) and upper bound (a-c)/(c(c+1)) 1F1(a+1;c+1;x)^2.
    """
    a, c = _rat(a), _rat(c)
    if a <= 0 or c <= 0:
        raise NonPositiveParameter("turan_1f1 needs a, c > 0")
    ctx = _ctx(precision_bits)
    xv = _mp(ctx, x)
    if xv < 0:
        raise ValueError("turan_1f1 needs x >= 0")
    wb = precision_bits + 16
    f0 = _f1f1(a, c, x, wb)
    f1 = _f1f1(a + 1, c + 1, x, wb)
    f2 = _f1f1(a + 2, c + 2, x, wb)
    if c >= a:
        reference = f1 * f1 - f0 * f2
        lower_rat = 2 * (c - a) / (c * (c + 1) * (c + 2))
        lower = lower_rat * x if isinstance(x, Fraction) else _mp(ctx, lower_rat) * xv
        upper = _mp(ctx, (c - a) / (c * (a + 1))) * f1 * f1
        tags = ("turan-concave-lower", "turanian-difference", "turan-concave-upper")
    else:
        reference = _mp(ctx, a / c) * f1 * f1 - _mp(ctx, (a + 1) / (c + 1)) * f0 * f2
        lower = (a - c) / (c * (c + 1))
        upper = _mp(ctx, (a - c) / (c * (c + 1))) * f1 * f1
        tags = ("turan-convex-lower", "turanian-weighted", "turan-convex-upper")
    out = _ctx(precision_bits)
    lower_out = lower if isinstance(lower, Fraction) else out.mpf(lower)
    return BoundTriple(lower_out, out.mpf(reference), out.mpf(upper), x, tags)


def _logderiv_plain(ctx, a, c, x):
    # Conjugate-stabilized root of the plain quadratic: 2a/(sqrt((x-c)^2
    # + 4ax) + c - x); the denominator is positive for all x >= 0.
    rad = (x - c) ** 2 + 4 * a * x
    if rad < 0:
        raise DomainError("plain logderiv radicand went negative")
    return 2 * a / (ctx.sqrt(rad) + c - x)


def _logderiv_shifted(ctx, a, c, x):
    # Conjugate-stabilized root of the shifted quadratic: (4ax + 4c) /
    # ((2x + 2c/a)(sqrt(D2) + c - 1 - x)) with D2 = (x-c+1)^2 + 4ax + 4c;
    # sqrt(D2) > x + 1 - c keeps the denominator positive.
    rad = (x - c + 1) ** 2 + 4 * a * x + 4 * c
    if rad < 0:
        raise DomainError("shifted logderiv radicand went negative")
    return (4 * a * x + 4 * c) / ((2 * x + 2 * c / a) * (ctx.sqrt(rad) + c - 1 - x))


def logderiv_envelope(a, c, x, precision_bits: int = DEFAULT_PRECISION):
    """Lower and upper bounds for the logarithmic derivative of
    1F1(a;c;x), branching on the order of a and c.

    Both bounds tend to a/c as x -> 0 and to 1 as x -> infinity, and both
    equal 1 identically when a = c.
    """
    a, c = _rat(a), _rat(c)
    if a <= 0 or c <= 0:
        raise NonPositiveParameter("logderiv_envelope needs a, c > 0")
    ctx = _ctx(precision_bits + 16)
    xv = _mp(ctx, x)
    if xv < 0:
        raise ValueError("logderiv_envelope needs x >= 0")
    av, cv = _mp(ctx, a), _mp(ctx, c)
    plain = _logderiv_plain(ctx, av, cv, xv)
    shifted = _logderiv_shifted(ctx, av, cv, xv)
    out = _ctx(precision_bits)
    if c >= a:
        return out.mpf(shifted), out.mpf(plain)
    return out.mpf(plain), out.mpf(shifted)


def _b1(ctx, a, c, x):
    # First integrated envelope; b = (a+1)(a-c). All power bases are
    # positive on a, c > 0, x >= 0 (the conjugate identity D2 - (c-1-x-2a)^2
    # = 4(a+1)(c-a) settles the first base when c >= a).
    b = (a + 1) * (a - c)
    d2 = (x - c + 1) ** 2 + 4 * a * x + 4 * c
    if d2 < 0:
        raise DomainError("B1 radicand went negative")
    s = ctx.sqrt(d2)
    base1 = 1 + 2 * a - c + x + s
    base2 = c * c * (a + 1) + a - c + (a * a + b) * x + (a * a - b) * s
    if base1 <= 0 or base2 <= 0:
        raise DomainError("B1 power base went nonpositive")
    return (
        (2 + 2 * a) ** (-b / a)
        * c ** ((a * a - b) / a)
        * base1 ** ((a * a + b) / (2 * a))
        / base2 ** ((a * a - b) / (2 * a))
        * ctx.exp((x - c - 1 + s) / 2)
    )


def _b2(ctx, a, c, x):
    # Second integrated envelope with D = (x-c)^2 + 4ax; the second base
    # satisfies sqrt(D) >= |x - c| so it stays positive.
    d = (x - c) ** 2 + 4 * a * x
    if d < 0:
        raise DomainError("B2 radicand went negative")
    s = ctx.sqrt(d)
    base1 = 2 * a + s + x - c
    base2 = 2 * a * x / c + s - (x - c)
    if base1 <= 0 or base2 <= 0:
        raise DomainError("B2 power base went nonpositive")
    return (
        (4 * a * c) ** (c / 2)
        / (2 * a) ** a
        * base1 ** (a - c / 2)
        / base2 ** (c / 2)
        * ctx.exp((s + x - c) / 2)
    )


def kummer_envelope(a, c, x, precision_bits: int = DEFAULT_PRECISION):
    """Closed-form envelopes (B1, B2, orientation) for 1F1(a;c;x).

    B1 <= 1F1 <= B2 when c >= a > 0 (orientation "B1_LOWER"), and
    B2 <= 1F1 <= B1 when a >= c > 0 (orientation "B2_LOWER"); both equal
    e^x when a = c and both equal 1 at x = 0.
    """
    a, c = _rat(a), _rat(c)
    if a <= 0 or c <= 0:
        raise NonPositiveParameter("kummer_envelope needs a, c > 0")
    ctx = _ctx(precision_bits + 16)
    xv = _mp(ctx, x)
    if xv < 0:
        raise ValueError("kummer_envelope needs x >= 0")
    av, cv = _mp(ctx, a), _mp(ctx, c)
    b1 = _b1(ctx, av, cv, xv)
    b2 = _b2(ctx, av, cv, xv)
    out = _ctx(precision_bits)
    orientation = "B1_LOWER" if c >= a else "B2_LOWER"
    return out.mpf(b1), out.mpf(b2), orientation


def _gauss_bound_value(ctx, a, b, c, x):
    # Stable form 2c/(C + sqrt(C^2 - 4a(c-b+1)x)) with C = c + (a-b+1)x;
    # at b = c+1 the radicand collapses to C^2 and the value to c/C.
    bigc = c + (a - b + 1) * x
    rad = bigc * bigc - 4 * a * (c - b + 1) * x
    if rad < 0:
        raise DomainError("gauss ratio bound radicand went negative")
    return 2 * c / (bigc + ctx.sqrt(rad))


def gauss_ratio_bound(a, b, c, x, precision_bits: int = DEFAULT_PRECISION):
    """Quadratic closed-form bound for the Gauss ratio
    2F1(a+1,b;c+1;x)/2F1(a,b;c;x) on 0 <= x < 1 with c >= a > 0, b > 0.

    Returns (bound, direction): an UPPER bound when c+1 < b, a LOWER bound
    when c+1 > b, and the exact value (direction EQUAL) when b = c+1,
    where the formula collapses to c/(c-(c-a)x).
    """
    a, b, c = _rat(a), _rat(b), _rat(c)
    if not (c >= a > 0) or b <= 0:
        raise ValueError("gauss_ratio_bound needs c >= a > 0 and b > 0")
    ctx = _ctx(precision_bits + 16)
    xv = _mp(ctx, x)
    if not 0 <= xv < 1:
        raise ValueError("gauss_ratio_bound needs 0 <= x < 1")
    value = _gauss_bound_value(ctx, _mp(ctx, a), _mp(ctx, b), _mp(ctx, c), xv)
    if b == c + 1:
        direction = EQUAL
    elif c + 1 < b:
        direction = UPPER
    else:
        direction = LOWER
    return _ctx(precision_bits).mpf(value), direction


def gauss_ratio_direct(a, b, c, x, precision_bits: int = DEFAULT_PRECISION):
    """Direct evaluation of 2F1(a+1,b;c+1;x)/2F1(a,b;c;x)."""
    a, b, c = _rat(a), _rat(b), _rat(c)
    wb = precision_bits + 16
    up = pfq(HyperParams((a + 1, b), (c + 1,), x), wb).value
    down = pfq(HyperParams((a, b), (c,), x), wb).value
    return _ctx(precision_bits).mpf(up / down)


@dataclass(frozen=True)
class CFSpec:
    """Euler continued fraction for the Gauss ratio, with partial
    numerators alpha_n = (a+n)(b-c-n)x and denominators
    beta_n = c+n+(a-b+n+1)x, and a tail policy: FULL_EULER truncates at
    the evaluation depth, PERIODIC_FROM closes the tail at level
    ``tail_start`` with the quadratic fixed point."""

    a: Fraction
    b: Fraction
    c: Fraction
    x: object
    tail: str = "FULL_EULER"
    tail_start: int = 0

    def __post_init__(self):
        object.__setattr__(self, "a", _rat(self.a))
        object.__setattr__(self, "b", _rat(self.b))
        object.__setattr__(self, "c", _rat(self.c))
        if self.tail not in ("FULL_EULER", "PERIODIC_FROM"):
            raise ValueError(f"unknown tail mode {self.tail!r}")
        if self.tail_start < 0:
            raise ValueError("tail_start must be nonnegative")

    def alpha(self, n: int):
        return (self.a + n) * (self.b - self.c - n) * self.x

    def beta(self, n: int):
        return self.c + n + (self.a - self.b + n + 1) * self.x


def continued_fraction_eval(
    cf: CFSpec, depth: int, precision_bits: int = DEFAULT_PRECISION
):
    """Backward-recurrence value of the ratio approximant c/(beta_0 + T_1).

    FULL_EULER evaluates ``depth`` fraction levels below the top (depth 0
    gives c/beta_0). PERIODIC_FROM closes the tail at level
    ``cf.tail_start`` with the minus-branch fixed point
    T = 2 alpha_N/(beta_N + sqrt(beta_N^2 + 4 alpha_N)); the leading
    partial numerator is cancelled against the classical prefactor, so a
    vanishing alpha_0 costs nothing.
    """
    ctx = _ctx(precision_bits + 16)

    def alpha(n):
        return _mp(ctx, cf.alpha(n))

    def beta(n):
        return _mp(ctx, cf.beta(n))

    def step_down(t, start: int):
        for n in range(start, 0, -1):
            den = beta(n) + t
            if den == 0:
                raise ZeroDenominator(n)
            t = alpha(n) / den
        return t

    cv = _mp(ctx, cf.c)
    if cf.tail == "PERIODIC_FROM":
        n0 = cf.tail_start
        an, bn = alpha(n0), beta(n0)
        rad = bn * bn + 4 * an
        if rad < 0:
            raise DomainError("periodic tail radicand went negative")
        den = bn + ctx.sqrt(rad)
        if den == 0:
            raise ZeroDenominator(n0)
        if n0 == 0:
            # r ~ prefactor * T_0 collapses to 2c/(beta_0 + sqrt(rad)).
            return _ctx(precision_bits).mpf(2 * cv / den)
        t = 2 * an / den
        t = step_down(t, n0 - 1)
    else:
        t = step_down(ctx.mpf(0), depth)
    den0 = beta(0) + t
    if den0 == 0:
        raise ZeroDenominator(0)
    return _ctx(precision_bits).mpf(cv / den0)


def _pochhammer_ratio(parts) -> Fraction:
    out = Fraction(1)
    for base, length, expo in parts:
        piece = rising_factorial(base, length)
        out = out * piece if expo > 0 else out / piece
    return out


def _check_turanian_hypotheses(kind: str, a: Fraction, c: Fraction, seq_vals) -> None:
    if kind not in ("F", "G", "H"):
        raise ValueError(f"unknown kind {kind!r}")
    if any(v < 0 for v in seq_vals):
        raise HypothesisUnmet("coefficient sequence must be nonnegative")
    strong = sequence_is_pf2(seq_vals) and sequence_is_log_concave(seq_vals)
    if kind == "F":
        if c < a:
            raise HypothesisUnmet(f"kind F needs c >= a, got a = {a}, c = {c}")
        if not strong:
            raise HypothesisUnmet(
                "kind F needs a log-concave sequence, positive somewhere, "
                "with no internal zeros"
            )
    elif kind == "G":
        if a < c:
            raise HypothesisUnmet(f"kind G needs a >= c, got a = {a}, c = {c}")
        if a > c + 1 and not strong:
            raise HypothesisUnmet(
                "kind G with a > c+1 needs a log-concave sequence with no "
                "internal zeros"
            )
    else:
        if (a < c or a > c + 1) and not strong:
            raise HypothesisUnmet(
                "kind H with a outside [c, c+1] needs a log-concave "
                "sequence with no internal zeros"
            )


def turanian_two_sided(
    kind: str,
    a,
    c,
    nu: int,
    x,
    sequence: CoefficientSequence | None = None,
    precision_bits: int = DEFAULT_PRECISION,
) -> BoundTriple:
    """Two-sided bracket for the Turanian series(nu)^2 -
    series(0) series(2 nu) of the ratio (F), gamma-ratio (G), or
    entire-kind (H) family, prefactors included.

    ``nu`` must be a positive integer; hypothesis failures raise
    HypothesisUnmet with the reason.
    """
    a, c = _rat(a), _rat(c)
    if sequence is None:
        sequence = CoefficientSequence.ones()
    if not isinstance(nu, int) or nu < 1:
        raise ValueError("nu must be a positive integer")
    if a <= 0 or c <= 0:
        raise NonPositiveParameter("turanian_two_sided needs a, c > 0")
    ctx = _ctx(precision_bits + 16)
    xv = _mp(ctx, x)
    if xv < 0:
        raise ValueError("turanian_two_sided needs x >= 0")
    horizon = 64 if sequence.horizon is None else sequence.horizon
    seq_vals = sequence.values(horizon)
    _check_turanian_hypotheses(kind, a, c, seq_vals)

    spec = FamilySpec(kind, a, c, sequence)
    v_nu = family_value(spec, nu, x, precision_bits)
    v_0 = family_value(spec, 0, x, precision_bits)
    v_2nu = family_value(spec, 2 * nu, x, precision_bits)
    reference = v_nu * v_nu - v_0 * v_2nu
    f0, f1 = seq_vals[0], sequence.term(1)

    if kind == "F":
        lower_rat = (
            2 * f0 * f1 * nu * nu * (c - a) / (c * (c + nu) * (c + 2 * nu))
        )
        lower = lower_rat * x if isinstance(x, Fraction) else _mp(ctx, lower_rat) * xv
        coeff = (
            rising_factorial(a + nu, nu) * rising_factorial(c, nu)
            - rising_factorial(c + nu, nu) * rising_factorial(a, nu)
        ) / (rising_factorial(c, nu) * rising_factorial(a + nu, nu))
        upper = _mp(ctx, coeff) * v_nu * v_nu
        tags = ("turanian-lower-F", "turanian-F", "turanian-upper-F")
    elif kind == "G":
        bracket = (
            rising_factorial(a, nu) ** 2 / rising_factorial(c, nu) ** 2
            - rising_factorial(a, 2 * nu) / rising_factorial(c, 2 * nu)
        )
        g_ratio = ctx.gamma(_mp(ctx, a)) / ctx.gamma(_mp(ctx, c))
        lower = _mp(ctx, f0 * f0) * g_ratio * g_ratio * _mp(ctx, bracket)
        coeff = (
            rising_factorial(c + nu, nu) * rising_factorial(a, nu)
            - rising_factorial(a + nu, nu) * rising_factorial(c, nu)
        ) / (rising_factorial(a, nu) * rising_factorial(c + nu, nu))
        upper = _mp(ctx, coeff) * v_nu * v_nu
        tags = ("turanian-lower-G", "turanian-G", "turanian-upper-G")
    else:
        lower = (
            _mp(ctx, f0 * f0)
            * _mp(ctx, rising_factorial(c + nu, nu) - rising_factorial(c, nu))
            / (ctx.gamma(_mp(ctx, c + nu)) * ctx.gamma(_mp(ctx, c + 2 * nu)))
        )
        coeff = 1 - rising_factorial(a, nu) * rising_factorial(c, nu) / (
            rising_factorial(a + nu, nu) * rising_factorial(c + nu, nu)
        )
        upper = _mp(ctx, coeff) * v_nu * v_nu
        tags = ("turanian-lower-H", "turanian-H", "turanian-upper-H")

    out = _ctx(precision_bits)
    lower_out = lower if isinstance(lower, Fraction) else out.mpf(lower)
    return BoundTriple(lower_out, out.mpf(reference), out.mpf(upper), x, tags)


def ratio_two_sided(
    kind: str,
    a,
    c,
    mu,
    nu: int,
    x,
    precision_bits: int = DEFAULT_PRECISION,
):
    """Two-sided estimate for the cross ratio
    series(0) series(mu+nu)/(series(nu) series(mu)) of the plain
    (sequence of ones) family of the given kind.

    Returns (lower, ratio, 1) where lower is the exact Pochhammer-ratio
    rational and ratio the direct evaluation; the ratio lies in
    [lower, 1] under the per-kind hypotheses.
    """
    a, c, mu = _rat(a), _rat(c), _rat(mu)
    if not isinstance(nu, int) or nu < 1:
        raise ValueError("nu must be a positive integer")
    if a <= 0 or c <= 0:
        raise NonPositiveParameter("ratio_two_sided needs a, c > 0")
    if mu < 0:
        raise ValueError("mu must be nonnegative")
    if kind == "F":
        if c < a:
            raise HypothesisUnmet(f"kind F needs c >= a, got a = {a}, c = {c}")
        lower = _pochhammer_ratio(
            [(c + mu, nu, 1), (a, nu, 1), (a + mu, nu, -1), (c, nu, -1)]
        )
    elif kind == "G":
        if a < c:
            raise HypothesisUnmet(f"kind G needs a >= c, got a = {a}, c = {c}")
        lower = _pochhammer_ratio(
            [(a + mu, nu, 1), (c, nu, 1), (c + mu, nu, -1), (a, nu, -1)]
        )
    elif kind == "H":
        lower = _pochhammer_ratio(
            [(a, nu, 1), (c, nu, 1), (a + mu, nu, -1), (c + mu, nu, -1)]
        )
    else:
        raise ValueError(f"unknown kind {kind!r}")
    ctx = _ctx(precision_bits + 16)
    xv = _mp(ctx, x)
    if xv < 0:
        raise ValueError("ratio_two_sided needs x >= 0")
    spec = FamilySpec(kind, a, c, CoefficientSequence.ones())
    v0 = family_value(spec, 0, x, precision_bits + 16)
    v_sum = family_value(spec, mu + nu, x, precision_bits + 16)
    v_nu = family_value(spec, nu, x, precision_bits + 16)
    v_mu = family_value(spec, mu, x, precision_bits + 16)
    ratio = _ctx(precision_bits).mpf(v0 * v_sum / (v_nu * v_mu))
    return lower, ratio, 1


FORMULAS = {
    "logderiv-plain": _logderiv_plain,
    "logderiv-shifted": _logderiv_shifted,
    "envelope-B1": _b1,
    "envelope-B2": _b2,
    "gauss-ratio-quadratic": _gauss_bound_value,
}
