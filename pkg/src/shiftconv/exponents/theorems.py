"""Error-term exponents for S(x, m) derived mechanically from bound shapes.

beta(mu) is the exponent with E(x, m) << x^(beta + eps) for m = x^mu. The
main bound is inf over Delta of sup over T of a spectral bound F(Delta, T);
everything here is produced by the optimizer rather than typed in, except
the three-term improvement in the window around m = x, whose statement is
already a closed form.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .expr import ONE, BoundExpr, Kind, Monomial, fmt, min_, mono, mono_of, prod, q, sum_
from .optimize import delta_profile, inf_Delta, sup_T, trace_piecewise
from .piecewise import Piece, PiecewiseLinear

KIM_SARNAK = Fraction(7, 64)


class NotApplicable(ValueError):
    """The requested bound does not hold for this theta."""


@dataclass(frozen=True)
class ExponentParams:
    theta: Fraction

    def __post_init__(self):
        t = q(self.theta)
        if not 0 <= t <= Fraction(1, 2):
            raise ValueError("theta must lie in [0, 1/2]")
        object.__setattr__(self, "theta", t)

    @property
    def kim_sarnak_admissible(self) -> bool:
        return self.theta <= KIM_SARNAK


def _params(p) -> ExponentParams:
    return p if isinstance(p, ExponentParams) else ExponentParams(q(p))


# ---------------------------------------------------------------------------
# bound shapes


def _spectral_tail(theta):
    # min(1, (T Delta)^(-3/2)) (1 + min(m^theta, m^(1/2) T^(-1)))
    return prod(
        min_(ONE, mono(et=Fraction(-3, 2), ed=Fraction(-3, 2))),
        sum_(ONE, min_(mono(em=theta), mono(em=Fraction(1, 2), et=-1))),
    )


@dataclass(frozen=True)
class BoundShape:
    """F(Delta, T) together with the mu-interval and Delta range it is used on."""

    name: str
    expr: BoundExpr
    mu_lo: Fraction
    mu_hi: Fraction
    delta_upper: BoundExpr | None


def shape_small_m(theta) -> BoundShape:
    """x Delta + x^(1/2) T^(1/2) * tail, used for m <= x (Delta < 1)."""
    theta = q(theta)
    f = sum_(
        mono(ex=1, ed=1),
        prod(mono(ex=Fraction(1, 2), et=Fraction(1, 2)), _spectral_tail(theta)),
    )
    return BoundShape("small_m", f, Fraction(0), Fraction(1), ONE)


def shape_large_m(theta) -> BoundShape:
    """(mx)^(1/2) Delta + (mx)^(1/4) T^(1/2) * tail, for x < m (Delta < (x/m)^(1/2))."""
    theta = q(theta)
    h = Fraction(1, 2)
    f = sum_(
        mono(ex=h, em=h, ed=1),
        prod(mono(ex=Fraction(1, 4), em=Fraction(1, 4), et=h), _spectral_tail(theta)),
    )
    upper = min_(ONE, mono(ex=h, em=-h))
    return BoundShape("large_m", f, Fraction(1), uniformity_threshold(theta), upper)


def shape_improved(theta, large_m: bool) -> BoundShape:
    """Bound shape with the refined small-T spectral estimate, both size regimes."""
    theta = q(theta)
    cut = min_(ONE, mono(et=Fraction(-3, 2), ed=Fraction(-3, 2)))
    t17 = mono(et=Fraction(17, 12))
    if large_m:
        h = Fraction(1, 2)
        f = sum_(
            mono(ex=h, em=h, ed=1),
            prod(
                mono(ex=Fraction(1, 4), em=Fraction(1, 4), et=Fraction(-3, 2)),
                cut,
                min_(mono(em=theta, et=2), prod(t17, sum_(mono(et=1), mono(em=Fraction(1, 4))))),
            ),
        )
        return BoundShape("improved_large_m", f, Fraction(1), Fraction(2), min_(ONE, mono(ex=h, em=-h)))
    f = sum_(
        mono(ex=1, ed=1),
        prod(mono(ex=Fraction(1, 2), et=Fraction(-3, 2)), cut, t17, sum_(mono(et=1), mono(em=Fraction(1, 4)))),
    )
    return BoundShape("improved_small_m", f, Fraction(0), Fraction(1), ONE)


# ---------------------------------------------------------------------------
# optimisation


def optimal_exponent(shape: BoundShape, mu):
    """(beta, delta) at one mu for a bound shape."""
    g = sup_T(shape.expr)
    return inf_Delta(g, mu, None, shape.delta_upper)


def trace_shape(shape: BoundShape) -> PiecewiseLinear:
    g = sup_T(shape.expr)

    def fn(mu):
        return delta_profile(g, mu, None, shape.delta_upper).argmin()[0]

    return trace_piecewise(fn, shape.mu_lo, shape.mu_hi)


@lru_cache(maxsize=64)
def _main(theta: Fraction) -> PiecewiseLinear:
    if not theta < Fraction(1, 2):
        raise ValueError("theorem_main needs theta < 1/2")
    parts = [trace_shape(shape_small_m(theta)), trace_shape(shape_large_m(theta))]
    out = PiecewiseLinear.concat(parts)
    if not out.is_continuous():
        raise ArithmeticError("main exponent is discontinuous")
    return out


def theorem_main_exponents(params) -> PiecewiseLinear:
    """beta(mu) on [0, 2/(1+2 theta))."""
    return _main(_params(params).theta)


@dataclass(frozen=True)
class WindowedBound:
    bound: PiecewiseLinear
    window: tuple  # open mu-interval (lo, hi)


def maini_window(theta) -> tuple[Fraction, Fraction]:
    theta = q(theta)
    lo = 5 / min(92 * theta - 5, 46 * theta)
    hi = Fraction(7) / (11 * (1 - 4 * theta))
    return lo, hi


def improved_expr(theta) -> BoundExpr:
    """x^(17/23) + (mx)^(17/46) + m^((13+4 theta)/28) x^(1/4)."""
    theta = q(theta)
    return sum_(
        mono(ex=Fraction(17, 23)),
        mono(ex=Fraction(17, 46), em=Fraction(17, 46)),
        mono(ex=Fraction(1, 4), em=(13 + 4 * theta) / 28),
    )


def theorem_maini_exponents(params) -> WindowedBound:
    theta = _params(params).theta
    if not Fraction(5, 48) < theta <= KIM_SARNAK:
        raise NotApplicable(f"improvement not applicable for theta={theta}")
    lo, hi = maini_window(theta)
    return WindowedBound(_mu_profile(improved_expr(theta), lo, hi), (lo, hi))


def _mu_profile(expr: BoundExpr, lo, hi) -> PiecewiseLinear:
    """Exponent of a T- and Delta-free expression as a function of mu."""
    # swap the roles of m and Delta so the one-variable evaluator runs in mu
    return delta_profile(_m_as_delta(expr), Fraction(0), _const(lo), _const(hi))


def _m_as_delta(expr: BoundExpr) -> BoundExpr:
    if expr.kind is Kind.MONO:
        lf = expr.leaf
        if lf.et or lf.ed:
            raise ValueError("expected an expression in x and m only")
        return mono_of(Monomial(lf.ex, 0, 0, lf.em))
    return BoundExpr(expr.kind, tuple(_m_as_delta(c) for c in expr.children))


def _const(v) -> BoundExpr:
    return mono(ex=v)


@lru_cache(maxsize=64)
def _combined(theta: Fraction) -> PiecewiseLinear:
    main = _main(theta)
    try:
        imp = theorem_maini_exponents(theta)
    except NotApplicable:
        return main
    lo, hi = imp.window
    lo, hi = max(lo, main.lo), min(hi, main.hi)
    if not lo < hi:
        return main
    mid = main.restrict(lo, hi).minimum(imp.bound.restrict(lo, hi))
    parts = []
    if main.lo < lo:
        parts.append(main.restrict(main.lo, lo))
    parts.append(mid)
    if hi < main.hi:
        parts.append(main.restrict(hi, main.hi))
    return PiecewiseLinear.concat(parts)


def combined_bound(params) -> PiecewiseLinear:
    """Pointwise minimum of the main bound and, inside its window, the improvement."""
    return _combined(_params(params).theta)


def uniformity_threshold(params) -> Fraction:
    """Largest eta with E(x, x^mu) = o(x) for all mu < eta: 2/(1+2 theta)."""
    theta = _params(params).theta
    if not theta < Fraction(1, 2):
        raise ValueError("theta must be < 1/2")
    return 2 / (1 + 2 * theta)


def uniformity_threshold_beta(beta) -> Fraction:
    beta = q(beta)
    if beta < 2:
        raise ValueError("beta must be >= 2")
    return beta / (beta - 1)


def level_crossing(f: PiecewiseLinear, level=1):
    """Smallest t with f(t) = level, or None."""
    level = Fraction(level)
    for left, right, p in f.intervals():
        if p.slope == 0:
            if p.intercept == level:
                return left
            continue
        t = (level - p.intercept) / p.slope
        if (left is None or t >= left) and (right is None or t <= right):
            return t
    return None


def oldth_expr(theta) -> BoundExpr:
    theta = q(theta)
    h = Fraction(1, 2)
    return sum_(
        mono(ex=Fraction(2, 3)),
        mono(ex=h, em=(1 + 4 * theta) / 8),
        mono(ex=Fraction(1, 3), em=Fraction(1, 3)),
        min_(mono(ex=h, em=Fraction(1, 4)), mono(ex=Fraction(1, 4), em=(3 + 4 * theta) / 8)),
    )


def theorem_oldth_exponents(params) -> PiecewiseLinear:
    """Envelope of the earlier conditional bound on mu in [0, 2]."""
    return _mu_profile(oldth_expr(_params(params).theta), Fraction(0), Fraction(2))


def improved_at_delta(theta, mu, delta=None):
    """sup over T of the refined shape at one (mu, delta); default delta is
    x^(-6/23) for m < x and (mx)^(-3/23) otherwise."""
    theta, mu = q(theta), q(mu)
    large = mu >= 1
    shape = shape_improved(theta, large)
    if delta is None:
        delta = Fraction(-3, 23) * (1 + mu) if large else Fraction(-6, 23)
    g = sup_T(shape.expr)
    return g.exponent(mu, q(delta))


# ---------------------------------------------------------------------------
# output


def dominating_term(piece: Piece) -> str:
    return piece.label("m", "x")


def exponent_rows(f: PiecewiseLinear):
    """(mu, beta, term) at each piece start, plus a closing row at the right end."""
    rows = []
    for left, _right, p in f.intervals():
        rows.append((left, p(left), dominating_term(p)))
    last = f.pieces[-1]
    rows.append((f.hi, last(f.hi), "end"))
    return rows


def to_csv(f: PiecewiseLinear) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["mu_num", "mu_den", "beta_num", "beta_den", "dominating_term"])
    for mu, beta, term in exponent_rows(f):
        mu, beta = Fraction(mu), Fraction(beta)
        w.writerow([mu.numerator, mu.denominator, beta.numerator, beta.denominator, term])
    return buf.getvalue()


def _affine(p: Piece) -> str:
    if p.slope == 0:
        return fmt(p.intercept)
    lin = "mu" if p.slope == 1 else f"{fmt(p.slope)}*mu"
    return lin if p.intercept == 0 else f"{lin} + {fmt(p.intercept)}"


def report(f: PiecewiseLinear, title="beta(mu)") -> str:
    lines = [title]
    for left, right, p in f.intervals():
        lines.append(f"  mu in [{fmt(left)}, {fmt(right)}): beta = {_affine(p)}   ({dominating_term(p)})")
    return "\n".join(lines)


def alpha_rows(f: PiecewiseLinear):
    """(alpha, beta) with m = x^(1/alpha) at every breakpoint; mu = 0 is skipped.

    beta is not linear in alpha, so only the corner points are exact.
    """
    out = []
    for mu, beta, _ in exponent_rows(f):
        if mu > 0:
            out.append((1 / Fraction(mu), Fraction(beta)))
    return out
