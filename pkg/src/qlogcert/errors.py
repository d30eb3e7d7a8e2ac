"""Exception types shared across the package."""
from __future__ import annotations


class QlogcertError(Exception):
    """Base class for all package-specific errors."""


class UnpairableArguments(QlogcertError):
    """Gamma arguments cannot be paired with integer differences, so the
    ratio has no exact rational value."""


class NonPositiveParameter(QlogcertError):
    """A parameter that must be strictly positive is not."""


class ExactnessUnavailable(QlogcertError):
    """The requested computation has no exact rational path for the given
    shifts; callers should reroute to the interval/float path."""


class PoleParameter(QlogcertError):
    """A denominator parameter sits at a pole (nonpositive integer), or an
    expression divides by an exactly zero quantity."""


class DivergentArgument(QlogcertError):
    """Series argument outside the convergence domain (p = q+1 and |x| >= 1)."""


class DomainError(QlogcertError):
    """An intermediate quantity (radicand, power base) left its valid domain.
    For the closed-form bounds this signals a bug, not a user error."""


class ZeroDenominator(QlogcertError):
    """A continued fraction hit a zero denominator.

    Attributes
    ----------
    depth : int
        The recursion level at which the zero denominator appeared.
    """

    def __init__(self, depth: int, message: str | None = None):
        self.depth = depth
        super().__init__(message or f"zero denominator at depth {depth}")


class HypothesisUnmet(QlogcertError):
    """Inputs do not satisfy the hypotheses of the inequality being evaluated.

    Attributes
    ----------
    reason : str
        Which hypothesis failed.
    """

    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(reason)


class UnsortedInput(QlogcertError):
    """An argument that must be sorted ascending is not."""


class IndexOutOfRange(QlogcertError, IndexError):
    """An index argument lies outside its documented range."""
