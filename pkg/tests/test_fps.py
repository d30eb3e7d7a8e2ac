from __future__ import annotations

import random
from fractions import Fraction as Q

from qlogcert.fps import (
    TruncatedSeries,
    add,
    cauchy_product,
    sign_pattern,
    subtract,
)


def test_construction_and_indexing():
    s = TruncatedSeries.from_coeffs([Q(1), Q(2), Q(3)])
    assert s.order == 2
    assert s[0] == 1 and s[2] == 3
    assert len(s) == 3
    z = TruncatedSeries.zero(4)
    assert z.is_zero() and z.order == 4


def test_from_function():
    s = TruncatedSeries.from_function(lambda n: Q(1, n + 1), 3)
    assert s.coeffs == (Q(1), Q(1, 2), Q(1, 3), Q(1, 4))


def test_cauchy_product_geometric():
    # (sum x^n)^2 = sum (n+1) x^n.
    g = TruncatedSeries.from_function(lambda n: Q(1), 6)
    p = cauchy_product(g, g)
    assert p.coeffs == tuple(Q(n + 1) for n in range(7))


def test_product_truncates_to_min_order():
    f = TruncatedSeries.from_coeffs([Q(1), Q(1), Q(1)])
    g = TruncatedSeries.from_coeffs([Q(1), Q(1)])
    assert cauchy_product(f, g).order == 1
    assert subtract(f, g).order == 1
    assert add(f, g).order == 1


def test_add_subtract_scale():
    f = TruncatedSeries.from_coeffs([Q(1), Q(2)])
    g = TruncatedSeries.from_coeffs([Q(3), Q(5)])
    assert add(f, g).coeffs == (Q(4), Q(7))
    assert subtract(g, f).coeffs == (Q(2), Q(3))
    assert f.scale(Q(1, 2)).coeffs == (Q(1, 2), Q(1))


def test_evaluate_is_horner():
    rng = random.Random(7)
    for _ in range(20):
        coeffs = [Q(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(8)]
        s = TruncatedSeries.from_coeffs(coeffs)
        x = Q(rng.randint(-3, 3), rng.randint(1, 5))
        direct = sum(c * x**n for n, c in enumerate(coeffs))
        assert s.evaluate(x) == direct


def test_truncate():
    s = TruncatedSeries.from_coeffs([Q(1), Q(2), Q(3), Q(4)])
    t = s.truncate(1)
    assert t.coeffs == (Q(1), Q(2))
    # Truncation never extends; asking for more keeps the series as is.
    assert s.truncate(9) is s


def test_sign_pattern():
    s = TruncatedSeries.from_coeffs([Q(0), Q(1), Q(-2), Q(0), Q(3)])
    p = sign_pattern(s)
    assert p.signs == (0, 1, -1, 0, 1)
    assert p.first_negative_index == 2
    assert p.first_positive_index == 1
    assert not p.all_nonnegative()
    assert p.change_count() == 2

    q = sign_pattern(TruncatedSeries.from_coeffs([Q(0), Q(2), Q(5)]))
    assert q.all_nonnegative()
    assert q.first_negative_index is None
