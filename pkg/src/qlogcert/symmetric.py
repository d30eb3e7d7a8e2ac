"""Elementary-symmetric-polynomial chain conditions that force
log-concavity of hypergeometric term sequences, and the majorization
shortcut that implies the chain for equal-length parameter vectors.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import IndexOutOfRange, NonPositiveParameter, UnsortedInput
from .families import CoefficientSequence
from .rational_core import rising_factorial


def _rats(xs: Sequence) -> tuple[Fraction, ...]:
    return tuple(x if isinstance(x, Fraction) else Fraction(x) for x in xs)


def elementary_symmetric(k: int, xs: Sequence) -> Fraction:
    """The k-th elementary symmetric polynomial e_k(xs), with e_0 = 1.

    Parameters
    ----------
    k : int
        Degree, 0 <= k <= len(xs).
    xs : sequence of rationals
        Variables.
    """
    vals = _rats(xs)
    if k < 0 or k > len(vals):
        raise IndexOutOfRange(
            f"elementary symmetric degree {k} outside 0..{len(vals)}"
        )
    # Newton triangle: fold in one variable at a time.
    row = [Fraction(1)] + [Fraction(0)] * k
    for x in vals:
        for j in range(min(k, len(row) - 1), 0, -1):
            row[j] += x * row[j - 1]
    return row[k]


@dataclass(frozen=True)
class ParamVectors:
    """Positive parameter vectors (a_1..a_{q-r}) over (b_1..b_q)."""

    numerators: tuple[Fraction, ...]
    denominators: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "numerators", _rats(self.numerators))
        object.__setattr__(self, "denominators", _rats(self.denominators))
        if len(self.numerators) > len(self.denominators):
            raise ValueError(
                "need at most as many numerator as denominator parameters"
            )
        for v in self.numerators + self.denominators:
            if v <= 0:
                raise NonPositiveParameter(f"parameter {v} must be positive")

    @property
    def q(self) -> int:
        return len(self.denominators)

    @property
    def r(self) -> int:
        return len(self.denominators) - len(self.numerators)


def chain_condition(pv: ParamVectors) -> bool:
    """Exact check of the descending ratio chain

    e_q(b)/e_{q-r}(a) <= e_{q-1}(b)/e_{q-r-1}(a) <= ... <= e_r(b)/e_0(a).

    Comparisons are cross-multiplied; all quantities are positive, so no
    sign flips occur. With r = q the chain is a single ratio and the check
    is vacuously true.
    """
    q, r = pv.q, pv.r
    num_e = [elementary_symmetric(i, pv.numerators) for i in range(q - r + 1)]
    den_e = [elementary_symmetric(r + i, pv.denominators) for i in range(q - r + 1)]
    # R_i = den_e[i]/num_e[i]; require R_{i+1} <= R_i for every i.
    return all(
        den_e[i + 1] * num_e[i] <= den_e[i] * num_e[i + 1]
        for i in range(q - r)
    )


def chain_is_strict(pv: ParamVectors) -> bool:
    """True when every inequality in the chain holds strictly."""
    q, r = pv.q, pv.r
    num_e = [elementary_symmetric(i, pv.numerators) for i in range(q - r + 1)]
    den_e = [elementary_symmetric(r + i, pv.denominators) for i in range(q - r + 1)]
    return all(
        den_e[i + 1] * num_e[i] < den_e[i] * num_e[i + 1]
        for i in range(q - r)
    )


def majorization_implies_chain(a_sorted: Sequence, b_sorted: Sequence) -> bool:
    """Prefix-sum domination of ascending vectors: sum of the first k
    entries of b_sorted never exceeds that of a_sorted.

    Both vectors must be ascending, positive, and of equal length; when the
    check passes, the r = 0 ratio chain for (a_sorted, b_sorted) holds.
    """
    a = _rats(a_sorted)
    b = _rats(b_sorted)
    if len(a) != len(b):
        raise ValueError("majorization needs equal-length vectors")
    for xs in (a, b):
        if any(xs[i] > xs[i + 1] for i in range(len(xs) - 1)):
            raise UnsortedInput("parameter vectors must be ascending")
        if any(v <= 0 for v in xs):
            raise NonPositiveParameter("parameters must be positive")
    pa = Fraction(0)
    pb = Fraction(0)
    for ai, bi in zip(a, b):
        pa += ai
        pb += bi
        if pb > pa:
            return False
    return True


def hyper_term_sequence(pv: ParamVectors, horizon: int) -> CoefficientSequence:
    """The hypergeometric term sequence f_n = prod (a_i)_n / prod (b_j)_n
    tabulated exactly through index ``horizon``."""
    values = []
    for n in range(horizon + 1):
        v = Fraction(1)
        for a in pv.numerators:
            v *= rising_factorial(a, n)
        for b in pv.denominators:
            v /= rising_factorial(b, n)
        values.append(v)
    return CoefficientSequence.explicit(values)
