from __future__ import annotations

import dataclasses
import random
from fractions import Fraction as Q

import pytest

import qlogcert.families as families_mod
from qlogcert.errors import PoleParameter
from qlogcert.families import CoefficientSequence, FamilySpec
from qlogcert.fps import TruncatedSeries
from qlogcert.qlog_verifier import (
    CERTIFIED,
    HYPOTHESIS_UNMET,
    INDETERMINATE,
    VIOLATION,
    TheoremId,
    absum_value,
    check_gosper_antidifference,
    check_kummer_identity,
    check_multiplicative_convexity,
    check_reciprocal_log_convexity,
    explore_conjecture,
    phi_first_coefficient,
    verify_theorem,
)


def test_theorem_id_lookup():
    assert TheoremId.from_string("T1") is TheoremId.T1_F_CONCAVE
    assert TheoremId.from_string("T1_F_CONCAVE") is TheoremId.T1_F_CONCAVE
    assert TheoremId.from_string("C2") is TheoremId.C2_CONJ
    with pytest.raises(ValueError):
        TheoremId.from_string("T9")
    assert TheoremId.T6_Q_CONVEX.expected_sign == -1
    assert TheoremId.T5_H_CONCAVE.family == "H"
    assert TheoremId.C1_CONJ.is_conjecture


def test_t1_small_grid_certified():
    spec = FamilySpec(family="F", a=Q(1), c=Q(2))
    grid = [(Q(0), Q(1)), (Q(1), Q(1)), (Q(3, 2), Q(1)), (Q(2), Q(2))]
    report = verify_theorem(TheoremId.T1_F_CONCAVE, spec, grid, 20)
    assert report.all_certified()
    assert all(p.exact for p in report.points)


def test_t1_wrong_order_is_hypothesis_unmet():
    spec = FamilySpec(family="F", a=Q(2), c=Q(1))
    report = verify_theorem(
        TheoremId.T1_F_CONCAVE, spec, [(Q(1), Q(1))], 10
    )
    assert report.overall_verdict() == HYPOTHESIS_UNMET
    assert report.points[0].reason


def test_t1_non_discrete_pair_is_hypothesis_unmet():
    spec = FamilySpec(family="F", a=Q(1), c=Q(2))
    report = verify_theorem(
        TheoremId.T1_F_CONCAVE, spec, [(Q(1, 2), Q(1, 2))], 10
    )
    assert report.points[0].verdict == HYPOTHESIS_UNMET


def test_t1_internal_zero_sequence_is_hypothesis_unmet():
    seq = CoefficientSequence.explicit([Q(1), Q(0), Q(1)])
    spec = FamilySpec(family="F", a=Q(1), c=Q(2), sequence=seq)
    report = verify_theorem(TheoremId.T1_F_CONCAVE, spec, [(Q(1), Q(1))], 10)
    assert report.overall_verdict() == HYPOTHESIS_UNMET


def test_t2_certified_with_real_shifts():
    spec = FamilySpec(family="F", a=Q(3), c=Q(1))
    grid = [(Q(1, 2), Q(2)), (Q(3, 4), Q(5, 4)), (Q(0), Q(3))]
    report = verify_theorem(TheoremId.T2_F_CONVEX, spec, grid, 20)
    assert report.all_certified()


def test_family_mismatch_raises():
    spec = FamilySpec(family="G", a=Q(1), c=Q(2))
    with pytest.raises(ValueError):
        verify_theorem(TheoremId.T1_F_CONCAVE, spec, [(Q(1), Q(1))], 10)


def test_conjecture_vs_theorem_dispatch():
    spec = FamilySpec(family="F", a=Q(1), c=Q(2))
    with pytest.raises(ValueError):
        verify_theorem(TheoremId.C1_CONJ, spec, [(Q(1), Q(1))], 10)
    with pytest.raises(ValueError):
        explore_conjecture(TheoremId.T1_F_CONCAVE, spec, [(Q(1), Q(1))], 10)


def test_conjecture_exploration_real_shifts():
    spec = FamilySpec(family="F", a=Q(1), c=Q(2))
    report = explore_conjecture(
        TheoremId.C1_CONJ, spec, [(Q(1, 2), Q(1, 2)), (Q(3, 4), Q(3, 2))], 15
    )
    assert report.overall_verdict() == CERTIFIED


def test_conjecture_interval_path_reports_indeterminate_or_certifies():
    # Irrational coupling constant forces the interval route.
    spec = FamilySpec(family="G", a=Q(2), c=Q(4, 3))
    report = explore_conjecture(
        TheoremId.C2_CONJ, spec, [(Q(1, 2), Q(1, 2))], 10, float_precision=256
    )
    point = report.points[0]
    assert not point.exact
    assert point.verdict in (CERTIFIED, INDETERMINATE)
    if point.verdict == INDETERMINATE:
        assert point.indeterminate_indices


def test_mutation_is_caught(monkeypatch):
    # Flipping the sign of any nonzero coefficient must flip the verdict.
    original = families_mod.product_difference

    def mutated(spec, mu, nu, order, mode="auto", precision=256):
        result = original(spec, mu, nu, order, mode=mode, precision=precision)
        coeffs = list(result.series.coeffs)
        idx = next((i for i, q in enumerate(coeffs) if q != 0), None)
        if idx is None:
            return result
        coeffs[idx] = -coeffs[idx]
        return dataclasses.replace(
            result, series=TruncatedSeries(tuple(coeffs), result.series.order)
        )

    monkeypatch.setattr(families_mod, "product_difference", mutated)
    spec = FamilySpec(family="F", a=Q(1), c=Q(2))
    report = verify_theorem(TheoremId.T1_F_CONCAVE, spec, [(Q(1), Q(1))], 20)
    assert report.overall_verdict() == VIOLATION
    assert report.points[0].violation_index is not None


def test_verdict_precedence():
    spec = FamilySpec(family="F", a=Q(1), c=Q(2))
    grid = [(Q(1), Q(1)), (Q(1, 2), Q(1, 2))]  # second point not discrete
    report = verify_theorem(TheoremId.T1_F_CONCAVE, spec, grid, 10)
    assert report.overall_verdict() == HYPOTHESIS_UNMET
    verdicts = {p.verdict for p in report.points}
    assert verdicts == {CERTIFIED, HYPOTHESIS_UNMET}


def test_phi_first_coefficient_matches_series():
    rng = random.Random(33)
    for _ in range(20):
        a = Q(rng.randint(1, 9), rng.randint(1, 3))
        c = Q(rng.randint(1, 9), rng.randint(1, 3))
        mu = Q(rng.randint(0, 8), 2)
        nu = Q(rng.randint(0, 8), 2)
        f0 = Q(rng.randint(1, 5))
        f1 = Q(rng.randint(1, 5), rng.randint(1, 3))
        seq = CoefficientSequence.explicit([f0, f1, Q(1)])
        spec = FamilySpec(family="F", a=a, c=c, sequence=seq)
        d = families_mod.product_difference(spec, mu, nu, 1)
        assert d.series[1] == phi_first_coefficient(f0, f1, a, c, mu, nu)


def test_kummer_identity_zero_and_poles():
    assert check_kummer_identity(Q(1), Q(2), Q(1), 25).is_zero()
    assert check_kummer_identity(Q(1, 2), Q(1, 3), Q(5, 7), 15).is_zero()
    with pytest.raises(PoleParameter):
        check_kummer_identity(Q(1), Q(-1), Q(1), 10)
    with pytest.raises(PoleParameter):
        check_kummer_identity(Q(1), Q(2), Q(-4), 10)  # c + mu = -2


def test_absum_values():
    assert absum_value(Q(2), Q(1), Q(1, 2), 3) == 14
    assert absum_value(Q(3), Q(2), Q(1), 4) == Q(136, 3)
    assert absum_value(Q(2), Q(2), Q(5), 3) == 40
    assert absum_value(Q(0), Q(3), Q(2), 4) == Q(3, 7)
    with pytest.raises(ValueError):
        absum_value(Q(1), Q(1), Q(0), 0)
    with pytest.raises(ValueError):
        absum_value(Q(1), Q(0), Q(1), 3)


def test_absum_matches_direct_sum():
    rng = random.Random(37)
    for _ in range(20):
        a = Q(rng.randint(0, 8), 2)
        b = Q(rng.randint(1, 8), 2)
        mu = Q(rng.randint(0, 5), 2)
        m = rng.randint(1, 9)
        direct = sum(
            _rf(a, k) * _rf(a + mu, m - k) / (_rf(b, k) * _rf(b + mu, m - k))
            * _binom(m, k) * (m - 2 * k + mu)
            for k in range(m + 1)
        )
        assert absum_value(a, b, mu, m) == direct


def test_gosper_certificate():
    assert check_gosper_antidifference(Q(3), Q(2), Q(1), 6)
    assert check_gosper_antidifference(Q(5, 2), Q(3, 2), Q(1, 2), 8)
    with pytest.raises(PoleParameter):
        check_gosper_antidifference(Q(1), Q(2), Q(3), 5)  # a - b + 1 = 0


def test_multiplicative_convexity_checker():
    import math

    # exp is multiplicatively convex: the geometric mean of abscissas
    # sits below the arithmetic mean and exp is increasing.
    assert check_multiplicative_convexity(
        math.exp, 0.5, 4.0, [0.0, 0.25, 0.5, 1.0]
    )
    # log(1 + x) bends the other way at wide spreads.
    assert not check_multiplicative_convexity(
        lambda x: math.log1p(x) + 1e-9, 0.01, 100.0, [0.5]
    )


def test_reciprocal_log_convexity_checker():
    import math

    ys = [1.0, 1.5, 2.0, 3.0, 4.0]
    # v = exp gives v(1/y) = e^(1/y); 1/y is convex, so the composition
    # is log-convex in y.
    assert check_reciprocal_log_convexity(math.exp, ys)
    # v(t) = 2 - t gives log(2 - 1/y), which is concave in y.
    assert not check_reciprocal_log_convexity(lambda t: 2.0 - t, ys)
    # All-zero samples are vacuously convex.
    assert check_reciprocal_log_convexity(lambda t: 0.0, ys)


def _rf(a: Q, n: int) -> Q:
    out = Q(1)
    for k in range(n):
        out *= a + k
    return out


def _binom(m: int, k: int) -> int:
    import math

    return math.comb(m, k)
