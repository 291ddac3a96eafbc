import csv
import io
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from shiftconv.exponents import expr as ex
from shiftconv.exponents import optimize as op
from shiftconv.exponents import theorems as th
from shiftconv.exponents.piecewise import Germ, Piece, PiecewiseLinear

TH = F(7, 64)
fracs = st.fractions(min_value=-3, max_value=3, max_denominator=40)


# -- expressions ------------------------------------------------------------


def test_substitute_mu_examples():
    e = ex.mono(ex=F(1, 2), em=F(1, 4)).substitute_mu(1)
    assert e.leaf == ex.Monomial(F(3, 4))
    assert ex.mono(em=TH).substitute_mu(0).leaf == ex.Monomial()
    atoms = th.shape_small_m(TH).expr.substitute_mu(1).atoms()
    # m^(1/2) T^(-1) x^(1/2) T^(1/2) becomes x T^(-1/2)
    assert ex.Monomial(1, 0, F(-1, 2), 0) in atoms


def test_power_flips_min_max():
    e = ex.min_(ex.mono(et=1), ex.mono(em=1))
    p = e.power(-2)
    assert p.kind is ex.Kind.MAX
    for mu, tau in [(F(1, 3), F(1, 2)), (F(2), F(1, 5))]:
        assert p.exponent(mu, tau) == -2 * e.exponent(mu, tau)


@given(fracs, fracs, fracs, st.fractions(-2, 2, max_denominator=7))
@settings(max_examples=80, deadline=None)
def test_power_is_scaling_of_exponent(mu, tau, delta, c):
    e = th.shape_small_m(TH).expr
    assert e.power(c).exponent(mu, tau, delta) == c * e.exponent(mu, tau, delta)


def test_node_validation():
    with pytest.raises(ValueError):
        ex.BoundExpr(ex.Kind.SUM, (ex.ONE,))
    with pytest.raises(TypeError):
        ex.q(0.5)
    assert ex.q("7/64") == TH


# -- piecewise linear and germs --------------------------------------------


def test_germ_ordering():
    assert Germ(1, -1) < 1 < Germ(1, 1) < Germ(F(101, 100))
    assert Germ(2) == 2 and hash(Germ(2)) == hash(F(2))
    with pytest.raises(TypeError):
        Germ(1, 1) * Germ(1, 1)


lines = st.tuples(st.fractions(-3, 3, max_denominator=9), st.fractions(-3, 3, max_denominator=9))


@given(st.lists(lines, min_size=1, max_size=5), st.lists(lines, min_size=1, max_size=5), fracs)
@settings(max_examples=100, deadline=None)
def test_envelopes_pointwise(ls1, ls2, t):
    def env(ls, up):
        f = PiecewiseLinear.affine(*ls[0], F(-3), F(3))
        for s, c in ls[1:]:
            g = PiecewiseLinear.affine(s, c, F(-3), F(3))
            f = f.maximum(g) if up else f.minimum(g)
        return f

    f, g = env(ls1, True), env(ls2, False)
    assert f(t) == max(s * t + c for s, c in ls1)
    assert g(t) == min(s * t + c for s, c in ls2)
    assert (f + g)(t) == f(t) + g(t)
    assert f.minimum(g)(t) == min(f(t), g(t))
    assert f.is_continuous() and g.is_continuous()


def test_pl_restrict_concat_argmin():
    f = PiecewiseLinear([F(0)], [Piece(-1, 0), Piece(2, 0)])
    assert f.argmin() == (0, 0)
    r = f.restrict(F(-2), F(3))
    assert r(F(-2)) == 2 and r(F(1)) == 2
    a, b = r.restrict(F(-2), F(1)), r.restrict(F(1), F(3))
    assert PiecewiseLinear.concat([a, b]) == r
    with pytest.raises(ArithmeticError):
        PiecewiseLinear.affine(1, 0).argmin()
    with pytest.raises(ValueError):
        PiecewiseLinear([F(1), F(0)], [Piece(0, 0)] * 3)


# -- sup over T, inf over Delta --------------------------------------------


def test_sup_T_simple_peak():
    # sup_T min(1, (T D)^(-3/2)) T^(1/2) is D^(-1/2), attained at T = 1/D
    e = ex.prod(ex.min_(ex.ONE, ex.mono(et=F(-3, 2), ed=F(-3, 2))), ex.mono(et=F(1, 2)))
    g = op.sup_T(e)
    for delta in (F(-1), F(-1, 3), F(-7, 5)):
        assert g.exponent(0, delta) == -delta / 2
    assert ex.Monomial(0, 0, 0, -1) in op.balance_points(e)


def test_sup_T_divergent():
    with pytest.raises(ex.DivergentSupremum):
        op.sup_T(ex.mono(ex=1, et=F(1, 2)))
    # a cap makes it finite
    g = op.sup_T(ex.mono(ex=1, et=F(1, 2)), upper=ex.mono(em=1))
    assert g.exponent(F(1, 2), 0) == F(5, 4)


def test_candidate_sets():
    small = set(op.balance_points(th.shape_small_m(TH).expr))
    for t in (ex.Monomial(0, 0, 0, -1), ex.Monomial(0, F(1, 2) - TH), ex.Monomial(0, F(1, 2))):
        assert t in small
    imp = set(op.balance_points(th.shape_improved(TH, True).expr))
    for t in (ex.Monomial(0, F(1, 4)), ex.Monomial(0, 3 * (1 - 4 * TH) / 7), ex.Monomial(0, 0, 0, -1), ex.Monomial(0, 12 * TH / 5)):
        assert t in imp


@given(st.fractions(0, 1, max_denominator=30), st.fractions(-2, 0, max_denominator=30))
@settings(max_examples=40, deadline=None)
def test_sup_dominates_grid(mu, delta):
    # the symbolic sup equals the best candidate and no grid point exceeds it
    e = th.shape_small_m(TH).expr
    g = op.sup_T(e)
    val = g.exponent(mu, delta)
    grid = [F(k, 40) for k in range(0, 161)]
    assert max(e.exponent(mu, tau, delta) for tau in grid) <= val
    cands = [c.exponent(mu, 0, delta) for c in g.candidates]
    assert any(e.exponent(mu, tau, delta) == val for tau in cands)


@given(st.fractions(0, 1, max_denominator=30))
@settings(max_examples=25, deadline=None)
def test_inf_is_below_grid(mu):
    shape = th.shape_small_m(TH)
    g = op.sup_T(shape.expr)
    val, wit = op.inf_Delta(g, mu, None, shape.delta_upper)
    assert g.exponent(mu, wit) == val
    assert all(g.exponent(mu, F(-k, 30)) >= val for k in range(1, 90))


def test_inf_delta_cases():
    shape = th.shape_small_m(TH)
    g = op.sup_T(shape.expr)
    mu = F(1, 2)  # x >= m^(3/2 - theta)
    val, _ = op.inf_Delta(g, mu, None, shape.delta_upper)
    assert val == max(F(2, 3), (1 + 2 * TH) * mu / 4 + F(1, 2))
    assert g.exponent(mu, F(-1, 3)) == val
    mu = F(9, 10)  # x < m^(3/2 - theta)
    val, _ = op.inf_Delta(g, mu, None, shape.delta_upper)
    assert val == 2 * TH * mu / 3 + F(2, 3)
    assert g.exponent(mu, 2 * TH * mu / 3 - F(1, 3)) == val
    big = th.shape_large_m(TH)
    gb = op.sup_T(big.expr)
    mu = F(5, 4)
    val, _ = op.inf_Delta(gb, mu, None, big.delta_upper)
    assert val == (1 + 2 * TH) * mu / 3 + F(1, 3)
    assert gb.exponent(mu, -(F(1, 6) + (F(1, 6) - 2 * TH / 3) * mu)) == val


def test_infeasible_range():
    with pytest.raises(op.InfeasibleRange):
        op.delta_profile(ex.mono(ed=1), 0, ex.ONE, ex.ONE)


def test_trace_recovers_known_function():
    f = PiecewiseLinear([F(1, 3), F(5, 7)], [Piece(0, F(1, 2)), Piece(F(3, 2), 0), Piece(F(-1, 4), F(5, 4))], F(0), F(2))
    assert f.is_continuous()
    # piece selection works on germs, so f itself is an exact one-sided oracle
    got = op.trace_piecewise(lambda t: f.piece_at(t)(t), F(0), F(2))
    assert got == f


# -- bounds -----------------------------------------------------------------


def test_main_theta0():
    f = th.theorem_main_exponents(0)
    assert [(l, p.slope, p.intercept) for l, _, p in f.intervals()] == [(0, 0, F(2, 3)), (1, F(1, 3), F(1, 3))]
    assert f.hi == 2


def test_main_theta_7_64():
    f = th.theorem_main_exponents(TH)
    assert f.breaks == [F(64, 117), F(64, 89), F(1)]
    assert [p.slope for p in f.pieces] == [0, F(39, 128), F(7, 96), F(13, 32)]
    assert f.is_continuous()


@pytest.mark.parametrize("theta", [F(0), F(1, 50), F(1, 12), F(7, 64), F(1, 8), F(1, 5), F(1, 4), F(2, 5)])
def test_main_general_theta(theta):
    f = th.theorem_main_exponents(theta)
    b1, b2 = 1 / (F(3, 2) + 3 * theta), 1 / (F(3, 2) - theta)
    cases = [
        (b1 / 2, F(2, 3)),
        ((b1 + b2) / 2, (1 + 2 * theta) * (b1 + b2) / 8 + F(1, 2)),
        ((b2 + 1) / 2, 2 * theta * (b2 + 1) / 6 + F(2, 3)),
        (F(1) + (f.hi - 1) / 2, (1 + 2 * theta) * (1 + (f.hi - 1) / 2) / 3 + F(1, 3)),
    ]
    for mu, want in cases:
        assert f(mu) == want
    assert f.is_continuous()
    assert f.hi == th.uniformity_threshold(theta)


def test_maini():
    w = th.theorem_maini_exponents(TH)
    assert w.window == (F(160, 161), F(112, 99))
    assert w.bound(F(1)) == F(17, 23)
    lo, hi = th.maini_window(F(5, 48))
    assert lo == hi == F(12, 11)
    for bad in (F(5, 48), F(1, 10), F(1, 8)):
        with pytest.raises(th.NotApplicable):
            th.theorem_maini_exponents(bad)


def test_improved_shape_cross_check():
    c = th.combined_bound(TH)
    for mu in (F(1), F(21, 20), F(1232, 1137), F(11, 10)):
        assert th.improved_at_delta(TH, mu) == c(mu)


def test_combined_edges():
    c = th.combined_bound(TH)
    m = th.theorem_main_exponents(TH)
    assert c(F(64, 117)) == m(F(64, 117)) == F(2, 3)
    assert c.is_continuous()
    assert th.combined_bound(F(1, 10)) == th.theorem_main_exponents(F(1, 10))


def test_monotone_in_theta():
    thetas = [TH * k / 19 for k in range(20)]
    fs = [th.combined_bound(t) for t in thetas]
    grid = [F(k, 40) for k in range(0, 65)]
    for a, b in zip(fs, fs[1:]):
        for mu in grid:
            if mu < b.hi:
                assert a(mu) <= b(mu)


def test_thresholds():
    assert th.uniformity_threshold(0) == 2
    assert th.uniformity_threshold(TH) == F(64, 39)
    assert th.uniformity_threshold(F(1, 4)) == F(4, 3)
    assert [th.uniformity_threshold_beta(b) for b in (2, F(17, 6), 3)] == [2, F(17, 11), F(3, 2)]
    with pytest.raises(ValueError):
        th.uniformity_threshold_beta(F(3, 2))
    with pytest.raises(ValueError):
        th.uniformity_threshold(F(1, 2))


def test_oldth():
    f0 = th.theorem_oldth_exponents(0)
    assert f0(F(0)) == F(2, 3)
    assert f0.pieces[-1](F(2)) == 1
    f1 = th.theorem_oldth_exponents(F(5, 28))
    assert f1.is_continuous()
    grid = [F(k, 10) for k in range(20)]
    assert all(f1(mu) >= th.theorem_oldth_exponents(TH)(mu) for mu in grid)


def test_params():
    assert th.ExponentParams(TH).kim_sarnak_admissible
    assert not th.ExponentParams(F(1, 5)).kim_sarnak_admissible
    with pytest.raises(ValueError):
        th.ExponentParams(F(3, 4))


def test_csv_and_alpha():
    text = th.to_csv(th.combined_bound(TH))
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["mu_num", "mu_den", "beta_num", "beta_den", "dominating_term"]
    assert rows[1] == ["0", "1", "2", "3", "x^{2/3}"]
    assert rows[-1][:4] == ["64", "39", "1", "1"]
    alpha = th.alpha_rows(th.theorem_main_exponents(0))
    assert alpha == [(1, F(2, 3)), (F(1, 2), 1)]
