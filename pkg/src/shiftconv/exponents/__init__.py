"""Exact exponent calculus for the error term of S(x, m)."""

from .expr import ONE, BoundExpr, DivergentSupremum, Kind, Monomial, QExp, max_, min_, mono, prod, q, sum_
from .optimize import InfeasibleRange, SupT, balance_points, delta_profile, inf_Delta, sup_T, trace_piecewise
from .piecewise import Germ, Piece, PiecewiseLinear
from .theorems import (
    KIM_SARNAK,
    ExponentParams,
    NotApplicable,
    WindowedBound,
    combined_bound,
    improved_at_delta,
    level_crossing,
    maini_window,
    theorem_main_exponents,
    theorem_maini_exponents,
    theorem_oldth_exponents,
    uniformity_threshold,
    uniformity_threshold_beta,
)

substitute_mu = BoundExpr.substitute_mu

__all__ = [
    "ONE", "BoundExpr", "DivergentSupremum", "Kind", "Monomial", "QExp", "max_", "min_", "mono", "prod", "q", "sum_",
    "InfeasibleRange", "SupT", "balance_points", "delta_profile", "inf_Delta", "sup_T", "trace_piecewise",
    "Germ", "Piece", "PiecewiseLinear",
    "KIM_SARNAK", "ExponentParams", "NotApplicable", "WindowedBound", "combined_bound", "improved_at_delta",
    "level_crossing", "maini_window", "theorem_main_exponents", "theorem_maini_exponents",
    "theorem_oldth_exponents", "uniformity_threshold", "uniformity_threshold_beta", "substitute_mu",
]
