"""High-precision floating evaluation of generalized hypergeometric series
with certified truncation bounds, plus the transformation and contiguous
relations used by the bound evaluators.

Terms are summed at the requested precision plus 32 guard bits. Once every
term factor is positive the term-ratio is bounded by a monotone envelope;
the geometric tail estimate next_term * rho/(1 - rho) then certifies the
truncation error. Negative arguments are never summed directly: a 1F1 is
rewritten through the Kummer transformation and a 2F1 through Pfaff's
transformation, both of which land on positive arguments.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath

from .errors import DivergentArgument, PoleParameter

DEFAULT_PRECISION = 128
GUARD_BITS = 32
MAX_TERMS = 200000


def _ctx(bits: int):
    ctx = mpmath.mp.clone()
    ctx.prec = bits
    return ctx


def _to_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, str)):
        return Fraction(v)
    if isinstance(v, float):
        return Fraction(v)
    raise TypeError(f"cannot represent parameter {v!r} exactly")


def _mpf_of(ctx, v):
    if isinstance(v, Fraction):
        return ctx.mpf(v.numerator) / ctx.mpf(v.denominator)
    return ctx.mpf(v)


def _is_nonpositive_integer(q: Fraction) -> bool:
    return q.denominator == 1 and q <= 0


@dataclass(frozen=True)
class HyperParams:
    """Parameter bundle for pFq(A; B; x).

    Numerator and denominator parameters are stored exactly as fractions;
    the argument may be a fraction or any mpmath-compatible real.
    """

    numerators: tuple[Fraction, ...]
    denominators: tuple[Fraction, ...]
    x: object

    def __post_init__(self):
        object.__setattr__(
            self, "numerators", tuple(_to_fraction(v) for v in self.numerators)
        )
        object.__setattr__(
            self, "denominators", tuple(_to_fraction(v) for v in self.denominators)
        )
        for b in self.denominators:
            if _is_nonpositive_integer(b):
                raise PoleParameter(
                    f"denominator parameter {b} is a nonpositive integer"
                )
        if len(self.numerators) > len(self.denominators) + 1:
            raise DivergentArgument(
                "series with p > q+1 numerator parameters diverges"
            )

    def terminates_at(self) -> int | None:
        """Smallest n with a numerator factor (a_i + n) = 0, if any."""
        stops = [
            -int(a)
            for a in self.numerators
            if a.denominator == 1 and a <= 0
        ]
        return min(stops) if stops else None


@dataclass(frozen=True)
class EvalResult:
    """Value of a series with a bound on the truncation/rounding error."""

    value: object
    error_bound: object
    terms_used: int
    ratio_bound: object = None
    tail_index: int | None = None


def _rho_hat(ctx, abs_x, nums_sorted, dens_sorted, n: int):
    # Upper bound for sup over m >= n of |t_{m+1}/t_m|: paired parameter
    # ratios are monotone toward 1 once all factors are positive, unpaired
    # denominator factors only shrink.
    rho = abs_x
    p = len(nums_sorted)
    for a, b in zip(nums_sorted, dens_sorted[:p]):
        ratio = (a + n) / (b + n)
        if ratio > 1:
            rho *= ratio
    for b in dens_sorted[p:]:
        rho /= b + n
    return rho


def pfq(params: HyperParams, precision_bits: int = DEFAULT_PRECISION) -> EvalResult:
    """Evaluate pFq at the bundle's argument with a certified error bound.

    Parameters
    ----------
    params : HyperParams
        Parameter bundle; p <= q+1 with no nonpositive-integer denominator.
    precision_bits : int
        Target precision of the returned value.

    Raises
    ------
    DivergentArgument
        For p = q+1 with argument >= 1 unless a numerator terminates the
        series.
    ValueError
        For a negative argument on a shape other than 1F1 or 2F1 (no
        alternating summation is attempted).
    """
    wp = precision_bits + GUARD_BITS
    ctx = _ctx(wp)
    x = _mpf_of(ctx, params.x)
    p, q = len(params.numerators), len(params.denominators)
    stop = params.terminates_at()

    if x == 0:
        return EvalResult(_ctx(precision_bits).mpf(1), ctx.mpf(0), 1)

    if x < 0 and stop is None:
        if (p, q) == (1, 1):
            a, c = params.numerators[0], params.denominators[0]
            na, nc, nx, prefactor = kummer_transform(a, c, params.x, wp)
            inner = pfq(HyperParams((na,), (nc,), nx), wp)
            value = prefactor * inner.value
            err = abs(prefactor) * inner.error_bound + ctx.ldexp(abs(value), 8 - wp)
            return EvalResult(+value, +err, inner.terms_used)
        if (p, q) == (2, 1):
            a, b = params.numerators
            c = params.denominators[0]
            na, nb, nc, nx, prefactor = pfaff_transform(a, b, c, params.x, wp)
            inner = pfq(HyperParams((na, nb), (nc,), nx), wp)
            value = prefactor * inner.value
            err = abs(prefactor) * inner.error_bound + ctx.ldexp(abs(value), 8 - wp)
            return EvalResult(+value, +err, inner.terms_used)
        raise ValueError(
            "negative argument is only supported for 1F1 and 2F1 shapes"
        )

    if p == q + 1 and stop is None and abs(x) >= 1:
        raise DivergentArgument(
            f"series with p = q+1 diverges at |x| = {abs(x)} >= 1"
        )

    nums = [_mpf_of(ctx, a) for a in params.numerators]
    dens = [_mpf_of(ctx, b) for b in params.denominators]
    nums_sorted = sorted(nums)
    dens_sorted = sorted(dens + [ctx.mpf(1)])
    lowest = min(nums_sorted + dens_sorted)
    warmup = 0 if lowest > 0 else int(mpmath.floor(-lowest)) + 1
    abs_x = abs(x)
    eps = ctx.ldexp(ctx.mpf(1), -(precision_bits + 4))

    term = ctx.mpf(1)
    total = ctx.mpf(1)
    abs_sum = ctx.mpf(1)
    terms_used = 1
    tail = None
    rho = None
    tail_index = None
    for m in range(MAX_TERMS):
        if stop is not None and m >= stop:
            tail = ctx.mpf(0)
            tail_index = m
            break
        num = ctx.mpf(1)
        for a in nums:
            num *= a + m
        den = ctx.mpf(m + 1)
        for b in dens:
            den *= b + m
        term = term * x * num / den
        total += term
        abs_sum += abs(term)
        terms_used += 1
        n = m + 1
        if n >= warmup:
            rho = _rho_hat(ctx, abs_x, nums_sorted, dens_sorted, n)
            if rho < 1:
                tail = abs(term) * rho / (1 - rho)
                tail_index = n
                if tail <= eps * max(ctx.mpf(1), abs(total)):
                    break
    else:
        raise RuntimeError(
            f"series did not reach the tail target within {MAX_TERMS} terms"
        )
    if tail is None:
        raise RuntimeError("term-ratio bound never dropped below 1")

    # Inflate for floating-point slippage in the terms and in the bound
    # itself; abs_sum * 2^(8-wp) dominates the accumulated rounding.
    slop = ctx.ldexp(abs_sum, 8 - wp) * terms_used
    error = tail * (1 + ctx.ldexp(ctx.mpf(1), -20)) + slop
    out_ctx = _ctx(precision_bits)
    return EvalResult(out_ctx.mpf(total), +error, terms_used, rho, tail_index)


def pfq_values(
    numerators: Sequence, denominators: Sequence, x, precision_bits: int = DEFAULT_PRECISION
):
    """Convenience wrapper returning just the value."""
    return pfq(HyperParams(tuple(numerators), tuple(denominators), x), precision_bits).value


def kummer_transform(a, c, x, precision_bits: int = DEFAULT_PRECISION):
    """Kummer transformation bundle for 1F1(a;c;x) = e^x 1F1(c-a;c;-x).

    Returns (c-a, c, -x, prefactor) with prefactor = e^x evaluated at the
    requested precision.
    """
    a, c = _to_fraction(a), _to_fraction(c)
    ctx = _ctx(precision_bits)
    if isinstance(x, Fraction):
        nx = -x
    else:
        nx = -_mpf_of(ctx, x)
    return c - a, c, nx, ctx.exp(_mpf_of(ctx, x))


def pfaff_transform(a, b, c, x, precision_bits: int = DEFAULT_PRECISION):
    """Pfaff transformation bundle for
    2F1(a,b;c;x) = (1-x)^(-a) 2F1(a, c-b; c; x/(x-1)).

    Returns (a, c-b, c, x/(x-1), prefactor) with prefactor = (1-x)^(-a).
    Requires x < 1; maps x < 0 into the interval (0, 1).
    """
    a, b, c = _to_fraction(a), _to_fraction(b), _to_fraction(c)
    ctx = _ctx(precision_bits)
    xf = _mpf_of(ctx, x)
    if xf >= 1:
        raise ValueError("Pfaff transformation needs x < 1")
    if isinstance(x, Fraction):
        nx = x / (x - 1)
    else:
        nx = xf / (xf - 1)
    prefactor = (1 - xf) ** (-_mpf_of(ctx, a))
    return a, c - b, c, nx, prefactor


def kummer_log_derivative(a, c, x, precision_bits: int = DEFAULT_PRECISION):
    """Logarithmic derivative of 1F1(a;c;x), evaluated as
    a 1F1(a+1;c+1;x) / (c 1F1(a;c;x))."""
    a, c = _to_fraction(a), _to_fraction(c)
    ctx = _ctx(precision_bits)
    up = pfq(HyperParams((a + 1,), (c + 1,), x), precision_bits).value
    down = pfq(HyperParams((a,), (c,), x), precision_bits).value
    return _mpf_of(ctx, a) * up / (_mpf_of(ctx, c) * down)


def contiguous_residual_1f1(a, c, x, precision_bits: int = DEFAULT_PRECISION):
    """Absolute residual of the second-order contiguous relation

    1F1(a+2;c+2;x) = (c+1)(x-c)/((a+1)x) 1F1(a+1;c+1;x)
                     + c(c+1)/((a+1)x) 1F1(a;c;x).

    Requires x != 0.
    """
    a, c = _to_fraction(a), _to_fraction(c)
    ctx = _ctx(precision_bits)
    xf = _mpf_of(ctx, x)
    if xf == 0:
        raise ValueError("the contiguous relation is singular at x = 0")
    f0 = pfq(HyperParams((a,), (c,), x), precision_bits).value
    f1 = pfq(HyperParams((a + 1,), (c + 1,), x), precision_bits).value
    f2 = pfq(HyperParams((a + 2,), (c + 2,), x), precision_bits).value
    cf, af = _mpf_of(ctx, c), _mpf_of(ctx, a)
    rhs = (cf + 1) * (xf - cf) / ((af + 1) * xf) * f1 + cf * (cf + 1) / (
        (af + 1) * xf
    ) * f0
    return abs(f2 - rhs)


def contiguous_residual_2f1(a, b, c, x, precision_bits: int = DEFAULT_PRECISION):
    """Absolute residual of the contiguous relation

    (a+1)/(c+1) 2F1(a+2,b;c+2;x)
      = (c+(a-b+1)x)/((c-b+1)x) 2F1(a+1,b;c+1;x)
        - c/((c-b+1)x) 2F1(a,b;c;x).

    Requires x != 0 and c - b + 1 != 0.
    """
    a, b, c = _to_fraction(a), _to_fraction(b), _to_fraction(c)
    if c - b + 1 == 0:
        raise ValueError("the relation is singular at c - b + 1 = 0")
    ctx = _ctx(precision_bits)
    xf = _mpf_of(ctx, x)
    if xf == 0:
        raise ValueError("the contiguous relation is singular at x = 0")
    f0 = pfq(HyperParams((a, b), (c,), x), precision_bits).value
    f1 = pfq(HyperParams((a + 1, b), (c + 1,), x), precision_bits).value
    f2 = pfq(HyperParams((a + 2, b), (c + 2,), x), precision_bits).value
    af, bf, cf = (_mpf_of(ctx, v) for v in (a, b, c))
    lhs = (af + 1) / (cf + 1) * f2
    rhs = (cf + (af - bf + 1) * xf) / ((cf - bf + 1) * xf) * f1 - cf / (
        (cf - bf + 1) * xf
    ) * f0
    return abs(lhs - rhs)
