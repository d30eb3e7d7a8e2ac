"""Exact-arithmetic certification of coefficient-sign claims for
gamma-ratio power series, with interval-guarded float exploration,
identity checks, and closed-form bound evaluation."""
from __future__ import annotations

from .bounds import (
    EQUAL,
    FORMULAS,
    LOWER,
    UPPER,
    BoundTriple,
    CFSpec,
    continued_fraction_eval,
    exact_fraction,
    family_value,
    gauss_ratio_bound,
    gauss_ratio_direct,
    kummer_envelope,
    logderiv_envelope,
    ratio_two_sided,
    turan_1f1,
    turanian_two_sided,
)
from .errors import (
    DivergentArgument,
    DomainError,
    ExactnessUnavailable,
    HypothesisUnmet,
    IndexOutOfRange,
    NonPositiveParameter,
    PoleParameter,
    QlogcertError,
    UnpairableArguments,
    UnsortedInput,
    ZeroDenominator,
)
from .families import (
    FAMILIES,
    CoefficientSequence,
    FamilySpec,
    FloatSeries,
    IntervalSeries,
    PrefactoredSeries,
    core_coefficients,
    core_series,
    family_series,
    product_difference,
    product_difference_float,
    sequence_is_log_concave,
    sequence_is_pf2,
    sign_change_count,
)
from .fps import SignPattern, TruncatedSeries, cauchy_product, sign_pattern
from .hyper_eval import (
    EvalResult,
    HyperParams,
    contiguous_residual_1f1,
    contiguous_residual_2f1,
    kummer_log_derivative,
    kummer_transform,
    pfaff_transform,
    pfq,
    pfq_values,
)
from .qlog_verifier import (
    CERTIFIED,
    HYPOTHESIS_UNMET,
    INDETERMINATE,
    VIOLATION,
    CertificationReport,
    PointResult,
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
from .rational_core import (
    GammaProduct,
    PochhammerRatio,
    Rational,
    binomial,
    gamma_ratio_integer_shift,
    rising_factorial,
)
from .symmetric import (
    ParamVectors,
    chain_condition,
    chain_is_strict,
    elementary_symmetric,
    hyper_term_sequence,
    majorization_implies_chain,
)

__version__ = "0.1.0"

__all__ = [
    "BoundTriple", "CFSpec", "CertificationReport", "CoefficientSequence",
    "DivergentArgument", "DomainError", "EQUAL", "EvalResult",
    "ExactnessUnavailable", "FAMILIES", "FORMULAS", "FamilySpec",
    "FloatSeries", "GammaProduct", "HYPOTHESIS_UNMET", "HyperParams",
    "HypothesisUnmet", "INDETERMINATE", "IndexOutOfRange", "IntervalSeries",
    "LOWER", "NonPositiveParameter", "ParamVectors", "PochhammerRatio",
    "PointResult", "PoleParameter", "PrefactoredSeries", "QlogcertError",
    "Rational", "SignPattern", "TheoremId", "TruncatedSeries", "UPPER",
    "UnpairableArguments", "UnsortedInput", "VIOLATION", "ZeroDenominator",
    "absum_value", "binomial", "cauchy_product", "chain_condition",
    "chain_is_strict", "check_gosper_antidifference", "check_kummer_identity",
    "check_multiplicative_convexity", "check_reciprocal_log_convexity",
    "contiguous_residual_1f1", "contiguous_residual_2f1",
    "continued_fraction_eval", "core_coefficients", "core_series",
    "elementary_symmetric", "exact_fraction", "explore_conjecture",
    "family_series", "family_value", "gamma_ratio_integer_shift",
    "gauss_ratio_bound", "gauss_ratio_direct", "hyper_term_sequence",
    "kummer_envelope", "kummer_log_derivative", "kummer_transform",
    "logderiv_envelope", "majorization_implies_chain", "pfaff_transform",
    "pfq", "pfq_values", "phi_first_coefficient", "product_difference",
    "product_difference_float", "ratio_two_sided", "rising_factorial",
    "sequence_is_log_concave", "sequence_is_pf2", "sign_change_count",
    "sign_pattern", "turan_1f1", "turanian_two_sided", "verify_theorem",
    "CERTIFIED",
]
