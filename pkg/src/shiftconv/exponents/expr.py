"""Monomial bound expressions in x, m, T, Delta, handled through their x-exponents.

With m = x^mu, T = x^tau and Delta = x^delta every monomial is x to an affine
form in (mu, tau, delta). Up to constants a sum of powers is the largest of
them, so SUM and MAX share semantics on exponents and PROD adds them.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction

QExp = Fraction


def q(value) -> Fraction:
    """Parse 'p/q', ints and Fractions into an exact exponent."""
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        raise TypeError("exponents must be exact; pass 'p/q' or a Fraction")
    return Fraction(value)


def fmt(v: Fraction) -> str:
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


@dataclass(frozen=True)
class Monomial:
    """x^ex m^em T^et Delta^ed."""

    ex: Fraction = Fraction(0)
    em: Fraction = Fraction(0)
    et: Fraction = Fraction(0)
    ed: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("ex", "em", "et", "ed"):
            object.__setattr__(self, name, q(getattr(self, name)))

    def __mul__(self, other: "Monomial") -> "Monomial":
        return Monomial(self.ex + other.ex, self.em + other.em, self.et + other.et, self.ed + other.ed)

    def __pow__(self, c) -> "Monomial":
        c = q(c)
        return Monomial(self.ex * c, self.em * c, self.et * c, self.ed * c)

    def exponent(self, mu, tau=0, delta=0):
        out = self.ex + self.em * mu
        if self.et:
            out = out + self.et * tau
        if self.ed:
            out = out + self.ed * delta
        return out

    def __str__(self):
        parts = []
        for sym, e in (("m", self.em), ("x", self.ex), ("T", self.et), ("D", self.ed)):
            if e == 1:
                parts.append(sym)
            elif e:
                parts.append(f"{sym}^{{{fmt(e)}}}")
        return "".join(parts) or "1"


class Kind(enum.Enum):
    MONO = "mono"
    SUM = "sum"
    PROD = "prod"
    MIN = "min"
    MAX = "max"


class DivergentSupremum(ArithmeticError):
    """The supremum over T is infinite (positive growth on an unbounded range)."""


@dataclass(frozen=True)
class BoundExpr:
    kind: Kind
    children: tuple = ()
    leaf: Monomial | None = None

    def __post_init__(self):
        if self.kind is Kind.MONO:
            if self.leaf is None or self.children:
                raise ValueError("MONO nodes carry exactly one monomial")
        elif len(self.children) < 2:
            raise ValueError(f"{self.kind.name} needs at least two children")

    # -- evaluation -------------------------------------------------------

    def exponent(self, mu, tau=0, delta=0):
        """x-exponent of the expression at m = x^mu, T = x^tau, Delta = x^delta."""
        if self.kind is Kind.MONO:
            return self.leaf.exponent(mu, tau, delta)
        vals = [c.exponent(mu, tau, delta) for c in self.children]
        if self.kind is Kind.PROD:
            out = vals[0]
            for v in vals[1:]:
                out = out + v
            return out
        if self.kind is Kind.MIN:
            return min(vals)
        return max(vals)

    def slope_at_infinity(self, var: str) -> Fraction:
        """d(exponent)/d(var) for var ('T' or 'D') large, other variables fixed."""
        if self.kind is Kind.MONO:
            return self.leaf.et if var == "T" else self.leaf.ed
        vals = [c.slope_at_infinity(var) for c in self.children]
        if self.kind is Kind.PROD:
            return sum(vals, Fraction(0))
        if self.kind is Kind.MIN:
            return min(vals)
        return max(vals)

    def atoms(self) -> frozenset:
        """Monomials of the fully distributed form; every breakpoint of the
        expression lies where two of them balance."""
        if self.kind is Kind.MONO:
            return frozenset([self.leaf])
        sets = [c.atoms() for c in self.children]
        if self.kind is Kind.PROD:
            out = set()
            for combo in itertools.product(*sets):
                acc = combo[0]
                for mono in combo[1:]:
                    acc = acc * mono
                out.add(acc)
            return frozenset(out)
        return frozenset().union(*sets)

    def uses(self, var: str) -> bool:
        return any((a.et if var == "T" else a.ed) != 0 for a in self.leaves())

    def leaves(self):
        if self.kind is Kind.MONO:
            yield self.leaf
        else:
            for c in self.children:
                yield from c.leaves()

    # -- rewriting --------------------------------------------------------

    def power(self, c) -> "BoundExpr":
        c = q(c)
        if c == 0:
            return ONE
        if self.kind is Kind.MONO:
            return mono_of(self.leaf**c)
        kids = tuple(k.power(c) for k in self.children)
        kind = self.kind
        if c < 0 and kind is Kind.MIN:
            kind = Kind.MAX
        elif c < 0 and kind in (Kind.MAX, Kind.SUM):
            kind = Kind.MIN
        return BoundExpr(kind, kids)

    def substitute_T(self, t_expr: "BoundExpr") -> "BoundExpr":
        """Replace T by an expression free of T."""
        if self.kind is Kind.MONO:
            lf = self.leaf
            if lf.et == 0:
                return self
            rest = mono_of(Monomial(lf.ex, lf.em, 0, lf.ed))
            return prod(rest, t_expr.power(lf.et))
        return BoundExpr(self.kind, tuple(c.substitute_T(t_expr) for c in self.children))

    def substitute_mu(self, mu) -> "BoundExpr":
        """Set m = x^mu: every m-exponent is folded into the x-exponent."""
        mu = q(mu)
        if self.kind is Kind.MONO:
            lf = self.leaf
            return mono_of(Monomial(lf.ex + lf.em * mu, 0, lf.et, lf.ed))
        return BoundExpr(self.kind, tuple(c.substitute_mu(mu) for c in self.children))

    def __str__(self):
        if self.kind is Kind.MONO:
            return str(self.leaf)
        if self.kind is Kind.SUM:
            return "(" + " + ".join(map(str, self.children)) + ")"
        if self.kind is Kind.PROD:
            return " ".join(map(str, self.children))
        return f"{self.kind.value}(" + ", ".join(map(str, self.children)) + ")"


def mono_of(m: Monomial) -> BoundExpr:
    return BoundExpr(Kind.MONO, leaf=m)


def mono(ex=0, em=0, et=0, ed=0) -> BoundExpr:
    return mono_of(Monomial(ex, em, et, ed))


def _node(kind, args):
    args = tuple(args)
    if len(args) == 1:
        return args[0]
    return BoundExpr(kind, args)


def sum_(*args) -> BoundExpr:
    return _node(Kind.SUM, args)


def prod(*args) -> BoundExpr:
    return _node(Kind.PROD, args)


def min_(*args) -> BoundExpr:
    return _node(Kind.MIN, args)


def max_(*args) -> BoundExpr:
    return _node(Kind.MAX, args)


ONE = mono()
