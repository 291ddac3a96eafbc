"""Exact piecewise-linear functions of one variable, plus first-order germs.

Scalars may be Fractions or Germs; a Germ a + b*eps stands for a value
infinitesimally to one side of a, which lets the optimizer read off one-sided
linear pieces exactly instead of by finite differencing.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction

from .expr import fmt


class Germ:
    """a + b*eps with eps > 0 infinitesimal, ordered lexicographically."""

    __slots__ = ("a", "b")

    def __init__(self, a, b=0):
        self.a = a if type(a) is Fraction else Fraction(a)
        self.b = b if type(b) is Fraction else Fraction(b)

    @staticmethod
    def lift(v) -> "Germ":
        return v if isinstance(v, Germ) else Germ(v)

    def __add__(self, o):
        if isinstance(o, Germ):
            return Germ(self.a + o.a, self.b + o.b)
        return Germ(self.a + o, self.b)

    __radd__ = __add__

    def __neg__(self):
        return Germ(-self.a, -self.b)

    def __sub__(self, o):
        return self + (-o)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, c):
        if isinstance(c, Germ):
            if c.b and self.b:
                raise TypeError("product of two infinitesimal germs is second order")
            return Germ(self.a * c.a, self.a * c.b + self.b * c.a)
        return Germ(self.a * c, self.b * c)

    __rmul__ = __mul__

    def __truediv__(self, c):
        if isinstance(c, Germ):
            if c.b:
                if self.b == 0 and self.a == 0:
                    return Germ(0)
                # (a + b e) / (c + d e) = a/c + (b c - a d)/c^2 e for c != 0
                if c.a == 0:
                    raise ZeroDivisionError("division by a pure infinitesimal")
                return Germ(self.a / c.a, (self.b * c.a - self.a * c.b) / (c.a * c.a))
            c = c.a
        return Germ(self.a / c, self.b / c)

    def __rtruediv__(self, o):
        return Germ.lift(o) / self

    def _key(self):
        return (self.a, self.b)

    @staticmethod
    def _okey(o):
        return (o.a, o.b) if isinstance(o, Germ) else (o, 0)

    def __eq__(self, o):
        if isinstance(o, (int, Fraction)):
            return self.b == 0 and self.a == o
        if isinstance(o, Germ):
            return self._key() == o._key()
        return NotImplemented

    def __hash__(self):
        return hash(self.a) if self.b == 0 else hash(self._key())

    def __lt__(self, o):
        return (self.a, self.b) < Germ._okey(o)

    def __le__(self, o):
        return (self.a, self.b) <= Germ._okey(o)

    def __gt__(self, o):
        return (self.a, self.b) > Germ._okey(o)

    def __ge__(self, o):
        return (self.a, self.b) >= Germ._okey(o)

    def __repr__(self):
        return f"Germ({self.a}, {self.b})"


def standard(v) -> Fraction:
    """Drop the infinitesimal part."""
    return v.a if isinstance(v, Germ) else Fraction(v)


@dataclass(frozen=True)
class Piece:
    slope: object
    intercept: object

    def __call__(self, t):
        return self.slope * t + self.intercept

    def label(self, var="m", base="x") -> str:
        s, c = Fraction(standard(self.slope)), Fraction(standard(self.intercept))
        parts = []
        for sym, e in ((var, s), (base, c)):
            if e == 1:
                parts.append(sym)
            elif e:
                parts.append(f"{sym}^{{{fmt(e)}}}")
        return "".join(parts) or "1"


class PiecewiseLinear:
    """f(t) = pieces[i](t) on [breaks[i-1], breaks[i]); domain [lo, hi) with
    None standing for an infinite end. Pieces are closed on the left."""

    def __init__(self, breaks, pieces, lo=None, hi=None):
        breaks = list(breaks)
        pieces = [p if isinstance(p, Piece) else Piece(*p) for p in pieces]
        if len(pieces) != len(breaks) + 1:
            raise ValueError("need exactly one more piece than breakpoints")
        for u, v in zip(breaks, breaks[1:]):
            if not u < v:
                raise ValueError("breakpoints must be strictly increasing")
        if breaks and ((lo is not None and breaks[0] <= lo) or (hi is not None and breaks[-1] >= hi)):
            raise ValueError("breakpoints must lie strictly inside the domain")
        if lo is not None and hi is not None and not lo < hi:
            raise ValueError("empty domain")
        self.breaks = breaks
        self.pieces = pieces
        self.lo = lo
        self.hi = hi

    @classmethod
    def affine(cls, slope, intercept, lo=None, hi=None):
        return cls([], [Piece(slope, intercept)], lo, hi)

    # -- access -----------------------------------------------------------

    def index(self, t) -> int:
        if (self.lo is not None and t < self.lo) or (self.hi is not None and t > self.hi):
            raise ValueError(f"{t} outside domain [{self.lo}, {self.hi})")
        return bisect_right(self.breaks, t)

    def piece_at(self, t) -> Piece:
        return self.pieces[self.index(t)]

    def __call__(self, t):
        return self.piece_at(t)(t)

    def intervals(self):
        """(left, right, piece) triples; ends may be None."""
        ends = [self.lo] + self.breaks + [self.hi]
        return [(ends[i], ends[i + 1], p) for i, p in enumerate(self.pieces)]

    def is_continuous(self) -> bool:
        return all(
            self.pieces[i](b) == self.pieces[i + 1](b) for i, b in enumerate(self.breaks)
        )

    def __eq__(self, other):
        if not isinstance(other, PiecewiseLinear):
            return NotImplemented
        a, b = self.simplify(), other.simplify()
        return (a.lo, a.hi, a.breaks, a.pieces) == (b.lo, b.hi, b.breaks, b.pieces)

    def __repr__(self):
        rows = ", ".join(f"[{l}, {r}): {p.slope}*t + {p.intercept}" for l, r, p in self.intervals())
        return f"PiecewiseLinear({rows})"

    # -- algebra ----------------------------------------------------------

    def simplify(self) -> "PiecewiseLinear":
        breaks, pieces = [], [self.pieces[0]]
        for b, p in zip(self.breaks, self.pieces[1:]):
            if p == pieces[-1]:
                continue
            breaks.append(b)
            pieces.append(p)
        return PiecewiseLinear(breaks, pieces, self.lo, self.hi)

    def _merged(self, other):
        if (self.lo, self.hi) != (other.lo, other.hi):
            raise ValueError("piecewise functions live on different domains")
        pts = sorted(set(self.breaks) | set(other.breaks))
        ends = [self.lo] + pts + [self.hi]
        out = []
        i = j = 0
        for k in range(len(ends) - 1):
            left, right = ends[k], ends[k + 1]
            while i < len(self.breaks) and left is not None and self.breaks[i] <= left:
                i += 1
            while j < len(other.breaks) and left is not None and other.breaks[j] <= left:
                j += 1
            out.append((left, right, self.pieces[i], other.pieces[j]))
        return out

    def __add__(self, other):
        if not isinstance(other, PiecewiseLinear):
            return PiecewiseLinear(self.breaks, [Piece(p.slope, p.intercept + other) for p in self.pieces], self.lo, self.hi)
        rows = self._merged(other)
        return _assemble(
            [(l, r, Piece(p.slope + q.slope, p.intercept + q.intercept)) for l, r, p, q in rows],
            self.lo,
            self.hi,
        )

    def maximum(self, other):
        return self._envelope(other, upper=True)

    def minimum(self, other):
        return self._envelope(other, upper=False)

    def _envelope(self, other, upper):
        rows = []
        for left, right, p, q in self._merged(other):
            if p.slope == q.slope:
                hi_p = p.intercept >= q.intercept
                rows.append((left, right, p if hi_p == upper else q))
                continue
            cross = (q.intercept - p.intercept) / (p.slope - q.slope)
            steep, flat = (p, q) if p.slope > q.slope else (q, p)
            # to the right of the crossing the steeper line is on top
            first, second = (flat, steep) if upper else (steep, flat)
            inside_l = left is None or left < cross
            inside_r = right is None or cross < right
            if inside_l and inside_r:
                rows.append((left, cross, first))
                rows.append((cross, right, second))
            elif not inside_r:
                rows.append((left, right, first))
            else:
                rows.append((left, right, second))
        return _assemble(rows, self.lo, self.hi)

    def restrict(self, lo, hi) -> "PiecewiseLinear":
        if (self.lo is not None and (lo is None or lo < self.lo)) or (
            self.hi is not None and (hi is None or hi > self.hi)
        ):
            raise ValueError("restriction leaves the domain")
        rows = []
        for left, right, p in self.intervals():
            a = lo if left is None or (lo is not None and lo > left) else left
            b = hi if right is None or (hi is not None and hi < right) else right
            if a is not None and b is not None and not a < b:
                continue
            rows.append((a, b, p))
        return _assemble(rows, lo, hi)

    @staticmethod
    def concat(parts) -> "PiecewiseLinear":
        parts = list(parts)
        for a, b in zip(parts, parts[1:]):
            if a.hi != b.lo:
                raise ValueError("concatenated domains must abut")
        rows = [row for p in parts for row in p.intervals()]
        return _assemble(rows, parts[0].lo, parts[-1].hi)

    # -- optimisation -----------------------------------------------------

    def argmin(self):
        """(min value, first minimiser); raises if unbounded below."""
        first, last = self.pieces[0], self.pieces[-1]
        if self.lo is None and first.slope > 0:
            raise ArithmeticError("unbounded below as t -> -inf")
        if self.hi is None and last.slope < 0:
            raise ArithmeticError("unbounded below as t -> +inf")
        pts = [t for t in [self.lo] + self.breaks + [self.hi] if t is not None]
        if not pts:
            return first.intercept, 0
        best = None
        for t in pts:
            piece = self.pieces[min(bisect_right(self.breaks, t), len(self.pieces) - 1)]
            if t == self.hi:
                piece = last
            v = piece(t)
            if best is None or v < best[0]:
                best = (v, t)
        return best


def _assemble(rows, lo, hi) -> PiecewiseLinear:
    breaks, pieces = [], []
    for left, _right, piece in rows:
        if pieces and piece == pieces[-1]:
            continue
        if pieces:
            breaks.append(left)
        pieces.append(piece)
    return PiecewiseLinear(breaks, pieces, lo, hi)
