"""The four gamma-ratio series families and their product differences.

Each family multiplies a coefficient sequence f_n against a ratio of gamma
factors in a shift parameter mu:

  F: f_n (a+mu)_n / (c+mu)_n        * x^n / n!
  G: g_n Gamma(a+n+mu) / Gamma(c+n+mu) * x^n / n!
  H: h_n (a+mu)_n / Gamma(c+mu+n)   * x^n / n!
  Q: q_n Gamma(a+mu+n) / (c+mu)_n   * x^n / n!

All four factor as prefactor(mu) * core(mu; x) where the core has rational
coefficients f_n (a+mu)_n / ((c+mu)_n n!) and the prefactor is 1,
Gamma(a+mu)/Gamma(c+mu), 1/Gamma(c+mu), or Gamma(a+mu). The central object
is the product difference

  series(mu) * series(nu) - series(0) * series(mu+nu)
    = pref(mu) pref(nu) * [ core(mu) core(nu) - kappa * core(0) core(mu+nu) ]

with kappa = pref(0) pref(mu+nu) / (pref(mu) pref(nu)). The bracket is exact
whenever kappa collapses to a rational, which happens in particular when mu
or nu is a nonnegative integer; otherwise kappa is enclosed in an interval
and only the bracket's sign classification is reported.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath

from .errors import ExactnessUnavailable, NonPositiveParameter, PoleParameter
from .fps import FloatSeries, TruncatedSeries, cauchy_product, subtract
from .rational_core import GammaProduct, Rational, rising_factorial

FAMILIES = ("F", "G", "H", "Q")

DEFAULT_FLOAT_PRECISION = 128
DEFAULT_INTERVAL_PRECISION = 256


def _rat(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


@dataclass(frozen=True)
class CoefficientSequence:
    """A nonnegative-indexed coefficient sequence f_0, f_1, ...

    Kinds
    -----
    ones        f_n = 1
    pochhammer  f_n = (b)_n for a fixed rational b
    hyper_term  f_n = prod (p_i)_n / prod (q_j)_n
    explicit    finite table, zero beyond the horizon
    """

    kind: str
    params: tuple = ()
    horizon: int | None = None

    @classmethod
    def ones(cls) -> "CoefficientSequence":
        return cls("ones")

    @classmethod
    def pochhammer(cls, b) -> "CoefficientSequence":
        return cls("pochhammer", (_rat(b),))

    @classmethod
    def hyper_term(cls, numerators: Sequence, denominators: Sequence) -> "CoefficientSequence":
        nums = tuple(_rat(p) for p in numerators)
        dens = tuple(_rat(q) for q in denominators)
        for q in dens:
            if q <= 0 and q.denominator == 1:
                raise PoleParameter(
                    f"denominator parameter {q} makes the term ratio singular"
                )
        return cls("hyper_term", (nums, dens))

    @classmethod
    def explicit(cls, values: Sequence) -> "CoefficientSequence":
        vals = tuple(_rat(v) for v in values)
        return cls("explicit", (vals,), horizon=len(vals))

    def term(self, n: int) -> Fraction:
        if n < 0:
            raise ValueError("sequence index must be nonnegative")
        if self.kind == "ones":
            return Fraction(1)
        if self.kind == "pochhammer":
            return rising_factorial(self.params[0], n)
        if self.kind == "hyper_term":
            nums, dens = self.params
            out = Fraction(1)
            for p in nums:
                out *= rising_factorial(p, n)
            for q in dens:
                out /= rising_factorial(q, n)
            return out
        if self.kind == "explicit":
            vals = self.params[0]
            return vals[n] if n < len(vals) else Fraction(0)
        raise ValueError(f"unknown sequence kind {self.kind!r}")

    def values(self, order: int) -> tuple[Fraction, ...]:
        return tuple(self.term(n) for n in range(order + 1))

    def describe(self) -> str:
        if self.kind == "ones":
            return "f_n = 1"
        if self.kind == "pochhammer":
            return f"f_n = ({self.params[0]})_n"
        if self.kind == "hyper_term":
            nums, dens = self.params
            up = "*".join(f"({p})_n" for p in nums) or "1"
            down = "*".join(f"({q})_n" for q in dens)
            return f"f_n = {up}/{down}" if down else f"f_n = {up}"
        return f"f_n explicit, zero from index {self.horizon}"


@dataclass(frozen=True)
class FamilySpec:
    """One of the four families with fixed parameters a, c > 0 and a
    coefficient sequence."""

    family: str
    a: Fraction
    c: Fraction
    sequence: CoefficientSequence = field(default_factory=CoefficientSequence.ones)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"family must be one of {FAMILIES}, got {self.family!r}")
        object.__setattr__(self, "a", _rat(self.a))
        object.__setattr__(self, "c", _rat(self.c))
        if self.a <= 0:
            raise NonPositiveParameter(f"parameter a = {self.a} must be positive")
        if self.c <= 0:
            raise NonPositiveParameter(f"parameter c = {self.c} must be positive")

    def prefactor(self, mu) -> GammaProduct:
        """The strictly positive prefactor split off the series at shift mu."""
        mu = _rat(mu)
        if self.family == "F":
            return GammaProduct.one()
        if self.family == "G":
            return GammaProduct.from_gamma(self.a + mu) / GammaProduct.from_gamma(
                self.c + mu
            )
        if self.family == "H":
            return GammaProduct.one() / GammaProduct.from_gamma(self.c + mu)
        return GammaProduct.from_gamma(self.a + mu)


@dataclass(frozen=True)
class IntervalSeries:
    """Coefficient table of mpmath interval numbers, each guaranteed to
    enclose the true coefficient."""

    coeffs: tuple
    order: int
    precision: int

    def __getitem__(self, k: int):
        return self.coeffs[k]

    def __len__(self) -> int:
        return self.order + 1


@dataclass(frozen=True)
class PrefactoredSeries:
    """A series split as prefactor * body.

    ``prefactor`` is a GammaProduct that is strictly positive under the
    family's parameter constraints, so sign questions reduce to ``series``.
    ``exact`` records whether the body coefficients are exact rationals.
    For product differences, ``kappa`` is the gamma-ratio constant that
    couples the two convolutions and ``kappa_rational`` its exact value
    when one exists.
    """

    prefactor: GammaProduct
    series: TruncatedSeries | IntervalSeries
    exact: bool = True
    kappa: GammaProduct | None = None
    kappa_rational: Fraction | None = None


def core_coefficients(spec: FamilySpec, mu, order: int) -> tuple[Fraction, ...]:
    """Exact core coefficients f_n (a+mu)_n / ((c+mu)_n n!), n = 0..order."""
    mu = _rat(mu)
    if mu < 0:
        raise ValueError("shift mu must be nonnegative")
    a, c = spec.a + mu, spec.c + mu
    coeffs = []
    ratio = Fraction(1)
    for n in range(order + 1):
        if n > 0:
            # (a)_n/((c)_n n!) advances by (a+n-1)/((c+n-1) n) each step.
            ratio *= (a + n - 1) / ((c + n - 1) * n)
        coeffs.append(spec.sequence.term(n) * ratio)
    return tuple(coeffs)


def core_series(spec: FamilySpec, mu, order: int) -> TruncatedSeries:
    return TruncatedSeries(core_coefficients(spec, mu, order), order)


def family_series(
    spec: FamilySpec,
    mu,
    order: int,
    accept_prefactor: bool = False,
    precision: int = DEFAULT_FLOAT_PRECISION,
):
    """Truncated series of the family at shift mu.

    Returns a TruncatedSeries when the full coefficients are rational (the
    F family, or any family whose prefactor collapses to a rational), a
    PrefactoredSeries when ``accept_prefactor`` is set, and otherwise a
    FloatSeries at ``precision`` bits.
    """
    core = core_series(spec, mu, order)
    pref = spec.prefactor(mu)
    if accept_prefactor:
        return PrefactoredSeries(pref, core)
    as_rat = pref.try_rational()
    if as_rat is not None:
        return core.scale(as_rat)
    ctx = mpmath.mp.clone()
    ctx.prec = precision
    value = pref.evaluate(ctx)
    coeffs = tuple(
        value * ctx.mpf(c.numerator) / ctx.mpf(c.denominator) for c in core.coeffs
    )
    return FloatSeries(coeffs, order, precision)


def _kappa(spec: FamilySpec, mu, nu) -> GammaProduct:
    mu, nu = _rat(mu), _rat(nu)
    return (spec.prefactor(0) * spec.prefactor(mu + nu)) / (
        spec.prefactor(mu) * spec.prefactor(nu)
    )


def _interval_context(precision: int):
    ctx = mpmath.MPIntervalContext()
    ctx.prec = precision
    return ctx


def _interval_of_fraction(ctx, q: Fraction):
    return ctx.mpf(q.numerator) / ctx.mpf(q.denominator)


def product_difference(
    spec: FamilySpec,
    mu,
    nu,
    order: int,
    mode: str = "auto",
    precision: int = DEFAULT_INTERVAL_PRECISION,
) -> PrefactoredSeries:
    """The product difference series(mu)*series(nu) - series(0)*series(mu+nu)
    with its positive prefactor split off.

    Parameters
    ----------
    spec : FamilySpec
        Family and parameters.
    mu, nu : Fraction or int
        Nonnegative shifts.
    order : int
        Truncation order of the result.
    mode : str
        "auto" uses exact arithmetic when the coupling constant kappa is
        rational and falls back to interval enclosures; "exact" raises
        ExactnessUnavailable instead of falling back; "interval" forces the
        interval path.
    precision : int
        Interval precision in bits for the fallback path.
    """
    mu, nu = _rat(mu), _rat(nu)
    if mu < 0 or nu < 0:
        raise ValueError("shifts mu, nu must be nonnegative")
    if mode not in ("auto", "exact", "interval"):
        raise ValueError(f"unknown mode {mode!r}")

    cross = cauchy_product(core_series(spec, mu, order), core_series(spec, nu, order))
    outer = cauchy_product(
        core_series(spec, 0, order), core_series(spec, mu + nu, order)
    )
    prefactor = spec.prefactor(mu) * spec.prefactor(nu)
    kappa = _kappa(spec, mu, nu)
    kappa_rat = kappa.try_rational()

    if kappa_rat is not None and mode != "interval":
        body = subtract(cross, outer.scale(kappa_rat))
        return PrefactoredSeries(prefactor, body, True, kappa, kappa_rat)

    if mode == "exact":
        raise ExactnessUnavailable(
            f"kappa = {kappa} does not collapse to a rational; "
            "an integer mu or nu is required for the exact path"
        )

    ctx = _interval_context(precision)
    kappa_iv = (
        _interval_of_fraction(ctx, kappa_rat)
        if kappa_rat is not None
        else kappa.evaluate(ctx)
    )
    coeffs = tuple(
        _interval_of_fraction(ctx, cross.coeffs[m])
        - kappa_iv * _interval_of_fraction(ctx, outer.coeffs[m])
        for m in range(order + 1)
    )
    body = IntervalSeries(coeffs, order, precision)
    return PrefactoredSeries(prefactor, body, False, kappa, kappa_rat)


def product_difference_float(
    spec: FamilySpec,
    mu,
    nu,
    order: int,
    precision: int = DEFAULT_FLOAT_PRECISION,
) -> FloatSeries:
    """Independent floating-point evaluation of the product difference body.

    Recomputes the cores with running mpf ratios, convolves in floating
    point, and evaluates kappa through the gamma function, sharing no exact
    intermediates with product_difference. Used to cross-check the exact
    path.
    """
    mu, nu = _rat(mu), _rat(nu)
    ctx = mpmath.mp.clone()
    ctx.prec = precision

    def f_core(shift: Fraction):
        a = ctx.mpf((spec.a + shift).numerator) / ctx.mpf((spec.a + shift).denominator)
        c = ctx.mpf((spec.c + shift).numerator) / ctx.mpf((spec.c + shift).denominator)
        out = []
        ratio = ctx.mpf(1)
        for n in range(order + 1):
            if n > 0:
                ratio *= (a + n - 1) / ((c + n - 1) * n)
            fn = spec.sequence.term(n)
            out.append(ratio * ctx.mpf(fn.numerator) / ctx.mpf(fn.denominator))
        return out

    def f_conv(u, v):
        return [
            ctx.fsum(u[k] * v[n - k] for k in range(n + 1)) for n in range(order + 1)
        ]

    cross = f_conv(f_core(mu), f_core(nu))
    outer = f_conv(f_core(Fraction(0)), f_core(mu + nu))
    kappa = _kappa(spec, mu, nu).evaluate(ctx)
    coeffs = tuple(cross[m] - kappa * outer[m] for m in range(order + 1))
    return FloatSeries(coeffs, order, precision)


def _predicate_values(seq, horizon: int | None) -> list:
    if isinstance(seq, CoefficientSequence):
        if horizon is None:
            horizon = seq.horizon if seq.horizon is not None else 64
        return [seq.term(n) for n in range(horizon)]
    return [_rat(v) for v in seq]


def sequence_is_log_concave(seq, horizon: int | None = None) -> bool:
    """True when v_k^2 >= v_{k-1} v_{k+1} for every interior index.

    Accepts either a CoefficientSequence (checked over the first
    ``horizon`` terms) or an explicit sequence of values.
    """
    vals = _predicate_values(seq, horizon)
    return all(
        vals[k] * vals[k] >= vals[k - 1] * vals[k + 1]
        for k in range(1, len(vals) - 1)
    )


def sequence_is_pf2(seq, horizon: int | None = None) -> bool:
    """True when the sequence is nonnegative, not identically zero, and has
    no zero sandwiched between positive entries."""
    vals = _predicate_values(seq, horizon)
    if any(v < 0 for v in vals):
        return False
    positive = [k for k, v in enumerate(vals) if v > 0]
    if not positive:
        return False
    lo, hi = positive[0], positive[-1]
    return all(vals[k] > 0 for k in range(lo, hi + 1))


def sign_change_count(values: Sequence) -> int:
    """Number of sign changes in the sequence, zeros discarded."""
    signs = []
    for v in values:
        v = _rat(v)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)
