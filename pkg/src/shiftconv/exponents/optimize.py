"""sup over T, inf over Delta, and exact reconstruction of beta(mu)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .expr import ONE, BoundExpr, DivergentSupremum, Kind, Monomial, max_, min_, mono_of
from .piecewise import Germ, Piece, PiecewiseLinear, _assemble


class InfeasibleRange(ValueError):
    """The Delta interval is empty at the requested mu."""


def balance_points(expr: BoundExpr) -> list[Monomial]:
    """T-values (as monomials in x, m, Delta) where two atoms of expr balance."""
    atoms = sorted(expr.atoms(), key=lambda a: (a.et, a.ex, a.em, a.ed))
    out = []
    seen = set()
    for i, a in enumerate(atoms):
        for b in atoms[i + 1 :]:
            if a.et == b.et:
                continue
            # a_rest T^ea = b_rest T^eb  =>  T = (b_rest / a_rest)^(1/(ea - eb))
            c = 1 / (a.et - b.et)
            t = Monomial((b.ex - a.ex) * c, (b.em - a.em) * c, 0, (b.ed - a.ed) * c)
            if t not in seen:
                seen.add(t)
                out.append(t)
    return out


@dataclass(frozen=True)
class SupT:
    """sup_{T in [lower, upper]} of expr, kept as the candidate list it is a max over."""

    expr: BoundExpr
    candidates: tuple  # clamped T expressions
    lower: BoundExpr
    upper: BoundExpr | None

    def as_expr(self) -> BoundExpr:
        return max_(*(self.expr.substitute_T(c) for c in self.candidates))

    def exponent(self, mu, delta):
        return max(_eval_T(self.expr, mu, c.exponent(mu, 0, delta), delta) for c in self.candidates)


def _eval_T(expr, mu, tau, delta):
    return expr.exponent(mu, tau, delta)


def sup_T(expr: BoundExpr, lower: BoundExpr = ONE, upper: BoundExpr | None = None) -> SupT:
    """Exact supremum over T between lower (default T >= 4, i.e. exponent 0) and upper."""
    if upper is None and expr.slope_at_infinity("T") > 0:
        raise DivergentSupremum(f"{expr} grows without bound in T")
    cands = [lower]
    if upper is not None:
        cands.append(upper)
    for t in balance_points(expr):
        c = max_(lower, mono_of(t))
        if upper is not None:
            c = min_(upper, c)
        cands.append(c)
    return SupT(expr, tuple(cands), lower, upper)


# ---------------------------------------------------------------------------
# one-variable evaluation in delta


def _pl_of(expr: BoundExpr, mu, lo, hi, tsub=None):
    """Exponent of expr as a piecewise-linear function of delta at fixed mu.

    tsub, if given, is the piecewise-linear exponent of T to substitute.
    """
    k = expr.kind
    if k is Kind.MONO:
        lf = expr.leaf
        base = PiecewiseLinear.affine(lf.ed, lf.ex + lf.em * mu, lo, hi)
        if lf.et:
            if tsub is None:
                raise ValueError("expression still depends on T")
            scaled = PiecewiseLinear(tsub.breaks, [Piece(p.slope * lf.et, p.intercept * lf.et) for p in tsub.pieces], lo, hi)
            base = base + scaled
        return base
    parts = [_pl_of(c, mu, lo, hi, tsub) for c in expr.children]
    out = parts[0]
    for p in parts[1:]:
        if k is Kind.PROD:
            out = out + p
        elif k is Kind.MIN:
            out = out.minimum(p)
        else:
            out = out.maximum(p)
    return out


def delta_profile(g, mu, lower=None, upper=None) -> PiecewiseLinear:
    """The exponent of g (a SupT or a T-free expression) as a function of delta."""
    lo = None if lower is None else lower.exponent(mu)
    hi = None if upper is None else upper.exponent(mu)
    if lo is not None and hi is not None and not lo < hi:
        raise InfeasibleRange(f"empty Delta range at mu={mu}")
    if isinstance(g, SupT):
        prof = None
        for c in g.candidates:
            tpl = _pl_of(c, mu, lo, hi)
            val = _pl_of(g.expr, mu, lo, hi, tpl)
            prof = val if prof is None else prof.maximum(val)
        return prof
    return _pl_of(g, mu, lo, hi)


def inf_Delta(g, mu, lower=None, upper=None):
    """(optimal x-exponent, optimal delta) for inf over lower < Delta < upper."""
    return delta_profile(g, mu, lower, upper).argmin()


# ---------------------------------------------------------------------------
# reconstruction of a piecewise-linear function from an exact oracle


class TraceError(RuntimeError):
    pass


def _line_right(fn, a):
    v = fn(Germ(a, 1))
    v = Germ.lift(v)
    return Piece(v.b, v.a - v.b * a)


def _line_left(fn, b):
    v = Germ.lift(fn(Germ(b, -1)))
    s = -v.b
    return Piece(s, v.a - s * b)


def trace_piecewise(fn, lo, hi, grid=4, max_depth=40) -> PiecewiseLinear:
    """Rebuild a continuous piecewise-linear fn on [lo, hi) from exact one-sided
    evaluations. fn must accept Germ arguments."""
    lo, hi = Fraction(lo), Fraction(hi)
    right, left = {}, {}

    def R(a):
        if a not in right:
            right[a] = _line_right(fn, a)
        return right[a]

    def L(b):
        if b not in left:
            left[b] = _line_left(fn, b)
        return left[b]

    rows = []

    def seg(a, b, depth):
        la, rb = R(a), L(b)
        if la == rb:
            mid = (a + b) / 2
            if R(mid) == la and L(mid) == la:
                rows.append((a, b, la))
                return
        elif la.slope != rb.slope:
            c = (rb.intercept - la.intercept) / (la.slope - rb.slope)
            if a < c < b and L(c) == la and R(c) == rb:
                rows.append((a, c, la))
                rows.append((c, b, rb))
                return
        if depth >= max_depth:
            raise TraceError(f"no piecewise-linear structure resolved on [{a}, {b}]")
        c = (a + b) / 2
        if la.slope != rb.slope:
            cross = (rb.intercept - la.intercept) / (la.slope - rb.slope)
            if a < cross < b:
                c = cross
        seg(a, c, depth + 1)
        seg(c, b, depth + 1)

    step = (hi - lo) / grid
    for i in range(grid):
        seg(lo + i * step, lo + (i + 1) * step, 0)
    out = _assemble(rows, lo, hi)
    if not out.is_continuous():
        raise TraceError("traced function is discontinuous")
    return out
