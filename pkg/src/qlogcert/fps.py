"""Truncated formal power series over exact rationals, plus the float and
interval mirrors used when a prefactor cannot be made rational.

A series is a coefficient table c_0..c_M for a fixed truncation order M;
products truncate to the smaller order of the operands.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .rational_core import Rational


@dataclass(frozen=True)
class TruncatedSeries:
    """Exact truncated power series: coefficient k of x^k, k = 0..order."""

    coeffs: tuple[Fraction, ...]
    order: int

    def __post_init__(self):
        if len(self.coeffs) != self.order + 1:
            raise ValueError(
                f"expected {self.order + 1} coefficients, got {len(self.coeffs)}"
            )

    @classmethod
    def from_coeffs(cls, coeffs: Sequence) -> "TruncatedSeries":
        tup = tuple(Fraction(c) for c in coeffs)
        return cls(tup, len(tup) - 1)

    @classmethod
    def from_function(cls, fn: Callable[[int], Fraction], order: int) -> "TruncatedSeries":
        return cls(tuple(Fraction(fn(k)) for k in range(order + 1)), order)

    @classmethod
    def zero(cls, order: int) -> "TruncatedSeries":
        return cls((Fraction(0),) * (order + 1), order)

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k]

    def __len__(self) -> int:
        return self.order + 1

    def scale(self, factor) -> "TruncatedSeries":
        f = Fraction(factor)
        return TruncatedSeries(tuple(f * c for c in self.coeffs), self.order)

    def truncate(self, order: int) -> "TruncatedSeries":
        if order >= self.order:
            return self
        return TruncatedSeries(self.coeffs[: order + 1], order)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def evaluate(self, x) -> Fraction:
        """Horner evaluation of the truncated polynomial at rational x."""
        x = Fraction(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc


def cauchy_product(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product truncated to min(f.order, g.order)."""
    order = min(f.order, g.order)
    coeffs = []
    for n in range(order + 1):
        s = Fraction(0)
        for k in range(n + 1):
            s += f.coeffs[k] * g.coeffs[n - k]
        coeffs.append(s)
    return TruncatedSeries(tuple(coeffs), order)


def subtract(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """Coefficientwise difference truncated to min(f.order, g.order)."""
    order = min(f.order, g.order)
    coeffs = tuple(f.coeffs[n] - g.coeffs[n] for n in range(order + 1))
    return TruncatedSeries(coeffs, order)


def add(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    order = min(f.order, g.order)
    coeffs = tuple(f.coeffs[n] + g.coeffs[n] for n in range(order + 1))
    return TruncatedSeries(coeffs, order)


@dataclass(frozen=True)
class SignPattern:
    """Signs of a coefficient table: entries are -1, 0, or +1.

    ``first_negative_index`` / ``first_positive_index`` are None when no
    coefficient of that sign occurs.
    """

    signs: tuple[int, ...]
    first_negative_index: int | None
    first_positive_index: int | None

    def all_nonnegative(self) -> bool:
        return self.first_negative_index is None

    def all_nonpositive(self) -> bool:
        return self.first_positive_index is None

    def change_count(self) -> int:
        nonzero = [s for s in self.signs if s != 0]
        return sum(
            1 for a, b in zip(nonzero, nonzero[1:]) if a != b
        )


def sign_pattern(series: TruncatedSeries) -> SignPattern:
    """Classify each coefficient of an exact series as -1, 0, or +1."""
    signs = []
    first_neg = None
    first_pos = None
    for k, c in enumerate(series.coeffs):
        if c > 0:
            s = 1
            if first_pos is None:
                first_pos = k
        elif c < 0:
            s = -1
            if first_neg is None:
                first_neg = k
        else:
            s = 0
        signs.append(s)
    return SignPattern(tuple(signs), first_neg, first_pos)


@dataclass(frozen=True)
class FloatSeries:
    """Floating-point coefficient table produced when exactness is
    unavailable; carries the working precision in bits."""

    coeffs: tuple
    order: int
    precision: int

    def __getitem__(self, k: int):
        return self.coeffs[k]

    def __len__(self) -> int:
        return self.order + 1
