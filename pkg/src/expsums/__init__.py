"""Exponential sums over residue rings: exact kernels, decay diagnostics,
zero-count series, and major-arc comparisons."""

from .bounds import DecayFit, DeligneRow, Verdict, conjecture_gap_report, decay_fit, deligne_check
from .charsums import (
    AdditiveCharacter,
    ExpSumValue,
    exp_sum_composite,
    exp_sum_direct,
    exp_sum_naive,
    exp_sum_pruned,
    finite_field_sum,
)
from .circle import (
    CircleMethodReport,
    OscillatoryIntegrator,
    QuadConfig,
    SingularIntegralResult,
    SingularSeriesResult,
    WeightFunction,
    complete_sum_mod_q,
    major_arc_report,
    oscillatory_integral,
    singular_integral,
    singular_series,
    singular_series_local,
    weight_eval,
    weighted_exponential_sum,
    weighted_solution_count,
)
from .errors import BudgetExceededError, PolyParseError, QuadratureConvergenceError
from .geometry import (
    CriticalLocusReport,
    ExponentSheet,
    critical_count,
    estimate_s,
    exponent_sheet,
)
from .polynomials import ArcExpansion, Polynomial, arc_expansion, parse_polynomial, render_polynomial
from .zeta import (
    CountKind,
    CountTable,
    count_order_ge,
    count_zeros_mod,
    fourier_crosscheck,
    jacobian_squared_generators,
    pair_products,
    poincare_coeffs,
)

__all__ = [
    "AdditiveCharacter",
    "ArcExpansion",
    "BudgetExceededError",
    "CircleMethodReport",
    "CountKind",
    "CountTable",
    "CriticalLocusReport",
    "DecayFit",
    "DeligneRow",
    "ExpSumValue",
    "ExponentSheet",
    "OscillatoryIntegrator",
    "PolyParseError",
    "Polynomial",
    "QuadConfig",
    "QuadratureConvergenceError",
    "SingularIntegralResult",
    "SingularSeriesResult",
    "Verdict",
    "WeightFunction",
    "arc_expansion",
    "complete_sum_mod_q",
    "conjecture_gap_report",
    "count_order_ge",
    "count_zeros_mod",
    "critical_count",
    "decay_fit",
    "deligne_check",
    "estimate_s",
    "exp_sum_composite",
    "exp_sum_direct",
    "exp_sum_naive",
    "exp_sum_pruned",
    "exponent_sheet",
    "finite_field_sum",
    "fourier_crosscheck",
    "jacobian_squared_generators",
    "major_arc_report",
    "oscillatory_integral",
    "pair_products",
    "parse_polynomial",
    "poincare_coeffs",
    "render_polynomial",
    "singular_integral",
    "singular_series",
    "singular_series_local",
    "weight_eval",
    "weighted_exponential_sum",
    "weighted_solution_count",
]
