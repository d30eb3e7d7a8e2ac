"""Exact rational arithmetic kernels: rising factorials, binomials, and
gamma-ratio reductions that every other module consumes.

All values are immutable and every operation is pure, so concurrent use
needs no coordination.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import PoleParameter, UnpairableArguments

# Public alias: exact rational parameters and coefficients throughout the
# package are plain fractions, normalized eagerly by the Fraction type.
Rational = Fraction


def _as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        # Floats are accepted only when they are exact binary rationals the
        # caller produced intentionally (e.g. 0.5); Fraction preserves them.
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def rising_factorial(a, n: int) -> Fraction:
    """Return the rising factorial (a)_n = a(a+1)...(a+n-1), with (a)_0 = 1.

    Parameters
    ----------
    a : Fraction or int
        Base of the rising factorial.
    n : int
        Nonnegative number of factors.
    """
    if n < 0:
        raise ValueError("rising factorial needs a nonnegative length")
    a = _as_rational(a)
    out = Fraction(1)
    for i in range(n):
        out *= a + i
    return out


def binomial(m: int, k: int) -> int:
    """Return C(m, k); zero when k < 0 or k > m."""
    if m < 0:
        raise ValueError("binomial needs a nonnegative upper index")
    if k < 0 or k > m:
        return 0
    return math.comb(m, k)


@dataclass(frozen=True)
class PochhammerRatio:
    """A product of rising factorials with exponents +-1.

    ``factors`` is a tuple of (base, length, exponent) triples; the value is
    the product of rising_factorial(base, length) ** exponent. The empty
    product is 1. When every base is positive the value is positive.
    """

    factors: tuple[tuple[Fraction, int, int], ...] = ()

    @classmethod
    def one(cls) -> "PochhammerRatio":
        return cls(())

    @classmethod
    def build(cls, factors: Iterable[tuple]) -> "PochhammerRatio":
        norm = tuple(
            (_as_rational(base), int(length), int(expo))
            for base, length, expo in factors
        )
        for base, length, expo in norm:
            if length < 0:
                raise ValueError("rising factorial length must be nonnegative")
            if expo not in (-1, 1):
                raise ValueError("exponent must be +1 or -1")
        return cls(norm)

    def is_positive(self) -> bool:
        return all(base > 0 for base, _, _ in self.factors)

    def value(self) -> Fraction:
        out = Fraction(1)
        for base, length, expo in self.factors:
            piece = rising_factorial(base, length)
            if expo == 1:
                out *= piece
            else:
                if piece == 0:
                    raise PoleParameter(
                        f"({base})_{length} = 0 in a denominator"
                    )
                out /= piece
        return out

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        bits = []
        for base, length, expo in self.factors:
            s = f"({base})_{length}"
            bits.append(s if expo == 1 else s + "^-1")
        return "*".join(bits)


def _pair_by_residue(
    numerators: Sequence[Fraction], denominators: Sequence[Fraction]
) -> list[tuple[Fraction, Fraction]]:
    # Group gamma arguments by their fractional part; only arguments that
    # differ by an integer can cancel into rising factorials.
    groups: dict[Fraction, tuple[list[Fraction], list[Fraction]]] = {}
    for arg in numerators:
        key = arg - math.floor(arg)
        groups.setdefault(key, ([], []))[0].append(arg)
    for arg in denominators:
        key = arg - math.floor(arg)
        groups.setdefault(key, ([], []))[1].append(arg)
    pairs = []
    for key, (nums, dens) in sorted(groups.items()):
        if len(nums) != len(dens):
            raise UnpairableArguments(
                f"gamma arguments with fractional part {key} do not pair up"
            )
        for n_arg, d_arg in zip(sorted(nums), sorted(dens)):
            pairs.append((n_arg, d_arg))
    return pairs


def _pair_value(n_arg: Fraction, d_arg: Fraction) -> Fraction:
    # Gamma(n_arg) / Gamma(d_arg) with n_arg - d_arg an integer.
    diff = n_arg - d_arg
    k = int(diff)
    if k >= 0:
        piece = rising_factorial(d_arg, k)
        if piece == 0:
            # Gamma(d_arg) has a pole while Gamma(n_arg) is finite.
            return Fraction(0)
        return piece
    piece = rising_factorial(n_arg, -k)
    if piece == 0:
        raise PoleParameter(
            f"gamma ratio with pole in the numerator at argument {n_arg}"
        )
    return 1 / piece


def gamma_ratio_integer_shift(
    a, shifts: Sequence[tuple]
) -> Fraction:
    """Exact value of a product of gamma factors Gamma(a + offset)^sign.

    Parameters
    ----------
    a : Fraction or int
        Common base of all gamma arguments.
    shifts : sequence of (offset, sign)
        One entry per gamma factor; sign +1 places the factor in the
        numerator, -1 in the denominator.

    The arguments must pair up so each numerator/denominator pair differs by
    an integer; each pair collapses to a rising factorial. Raises
    UnpairableArguments otherwise.
    """
    a = _as_rational(a)
    numerators = []
    denominators = []
    for offset, sign in shifts:
        arg = a + _as_rational(offset)
        if sign == 1:
            numerators.append(arg)
        elif sign == -1:
            denominators.append(arg)
        else:
            raise ValueError("sign must be +1 or -1")
    out = Fraction(1)
    for n_arg, d_arg in _pair_by_residue(numerators, denominators):
        out *= _pair_value(n_arg, d_arg)
    return out


@dataclass(frozen=True)
class GammaProduct:
    """A positive prefactor of the form rational * product of Gamma(arg)^expo.

    Used to document the strictly positive factor split off a product
    difference so that sign certification can run on the rational cofactor.
    ``gammas`` maps each distinct argument to its net integer exponent.
    """

    rational_part: Fraction = Fraction(1)
    gammas: tuple[tuple[Fraction, int], ...] = ()

    @classmethod
    def one(cls) -> "GammaProduct":
        return cls()

    @classmethod
    def from_gamma(cls, arg, exponent: int = 1) -> "GammaProduct":
        arg = _as_rational(arg)
        if arg <= 0 and arg.denominator == 1:
            raise PoleParameter(f"Gamma({arg}) is a pole")
        return cls(Fraction(1), ((arg, exponent),))

    def _merged(self, other: "GammaProduct", flip: int) -> "GammaProduct":
        counts: dict[Fraction, int] = dict(self.gammas)
        for arg, expo in other.gammas:
            counts[arg] = counts.get(arg, 0) + flip * expo
        gammas = tuple(
            sorted((arg, expo) for arg, expo in counts.items() if expo != 0)
        )
        if flip == 1:
            rat = self.rational_part * other.rational_part
        else:
            rat = self.rational_part / other.rational_part
        return GammaProduct(rat, gammas)

    def __mul__(self, other):
        if isinstance(other, GammaProduct):
            return self._merged(other, 1)
        return GammaProduct(self.rational_part * _as_rational(other), self.gammas)

    def __truediv__(self, other):
        if isinstance(other, GammaProduct):
            return self._merged(other, -1)
        return GammaProduct(self.rational_part / _as_rational(other), self.gammas)

    def is_positive(self) -> bool:
        return self.rational_part > 0 and all(arg > 0 for arg, _ in self.gammas)

    def try_rational(self) -> Fraction | None:
        """Collapse to an exact rational if the gamma arguments pair up with
        integer differences; return None otherwise."""
        numerators: list[Fraction] = []
        denominators: list[Fraction] = []
        for arg, expo in self.gammas:
            target = numerators if expo > 0 else denominators
            target.extend([arg] * abs(expo))
        try:
            pairs = _pair_by_residue(numerators, denominators)
        except UnpairableArguments:
            return None
        out = self.rational_part
        for n_arg, d_arg in pairs:
            out *= _pair_value(n_arg, d_arg)
        return out

    def evaluate(self, ctx):
        """Numeric value under an mpmath-style context (needs ctx.gamma)."""
        out = ctx.mpf(self.rational_part.numerator) / ctx.mpf(
            self.rational_part.denominator
        )
        for arg, expo in self.gammas:
            g = ctx.gamma(
                ctx.mpf(arg.numerator) / ctx.mpf(arg.denominator)
            )
            out *= g ** expo
        return out

    def __str__(self) -> str:
        bits = []
        if self.rational_part != 1 or not self.gammas:
            bits.append(str(self.rational_part))
        for arg, expo in self.gammas:
            s = f"Gamma({arg})"
            bits.append(s if expo == 1 else f"{s}^{expo}")
        return "*".join(bits)
