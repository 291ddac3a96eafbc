"""Integer matrices of square determinant near i, and Hecke coset representatives.

Matrices are counted up to a global sign. For gamma = (a b; u v) of determinant
d^2 the hyperbolic quantity u(gamma i, i) is ((v-a)^2 + (b+u)^2) / (4 d^2), and
(A, B, C, D) = (v-a, b+u, a+v, b-u) turns det = d^2 into
C^2 + D^2 - A^2 - B^2 = 4 d^2.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

import numpy as np

from .arith import factorize, r2

MAX_D = 10
MAX_T = Fraction(4)


@dataclass(frozen=True)
class IntMat2:
    a: int
    b: int
    u: int
    v: int

    @property
    def det(self) -> int:
        return self.a * self.v - self.b * self.u

    def __matmul__(self, o: "IntMat2") -> "IntMat2":
        return IntMat2(
            self.a * o.a + self.b * o.u,
            self.a * o.b + self.b * o.v,
            self.u * o.a + self.v * o.u,
            self.u * o.b + self.v * o.v,
        )

    def __neg__(self):
        return IntMat2(-self.a, -self.b, -self.u, -self.v)

    def canonical(self) -> "IntMat2":
        """Representative of {gamma, -gamma}: first nonzero entry positive."""
        for e in (self.a, self.b, self.u, self.v):
            if e:
                return self if e > 0 else -self
        return self

    def act(self, z: complex) -> complex:
        return (self.a * z + self.b) / (self.u * z + self.v)

    def adjugate(self) -> "IntMat2":
        return IntMat2(self.v, -self.b, -self.u, self.a)


@dataclass(frozen=True)
class Quadruple:
    A: int
    B: int
    C: int
    D: int

    def __post_init__(self):
        if (self.A - self.C) % 2 or (self.B - self.D) % 2:
            raise ValueError("parity constraint A=C, B=D (mod 2) violated")

    @property
    def det4(self) -> int:
        return self.C**2 + self.D**2 - self.A**2 - self.B**2

    @classmethod
    def from_matrix(cls, g: IntMat2) -> "Quadruple":
        return cls(g.v - g.a, g.b + g.u, g.a + g.v, g.b - g.u)

    def to_matrix(self) -> IntMat2:
        return IntMat2(
            (self.C - self.A) // 2, (self.B + self.D) // 2, (self.B - self.D) // 2, (self.C + self.A) // 2
        )


def u_dist(z: complex, w: complex) -> float:
    if z.imag <= 0 or w.imag <= 0:
        raise ValueError("points must lie in the upper half-plane")
    return abs(z - w) ** 2 / (4 * z.imag * w.imag)


def _square_root(n: int) -> int:
    r = isqrt(n) if n >= 0 else -1
    if n <= 0 or r * r != n:
        raise ValueError(f"determinant {n} is not a positive perfect square")
    return r


def u_gamma_i(g: IntMat2) -> Fraction:
    _square_root(g.det)
    return Fraction((g.v - g.a) ** 2 + (g.b + g.u) ** 2, 4 * g.det)


def _check_ceiling(d, t):
    if not 1 <= d <= MAX_D:
        raise ValueError(f"d={d} outside 1..{MAX_D}")
    if not 0 < t <= MAX_T:
        raise ValueError(f"t={t} outside (0, {MAX_T}]")


def _bounds(d, t):
    """Largest |A| with A^2 < 4 d^2 t and largest |C| with C^2 < 4 d^2 (1 + t)."""
    p, qd = t.numerator, t.denominator
    amax = isqrt((4 * d * d * p - 1) // qd)
    cmax = isqrt((4 * d * d * (p + qd) - 1) // qd)
    return amax, cmax


def count_M_direct(d: int, t) -> int:
    """#{gamma : det = d^2, u(gamma i, i) < t} up to sign, by matrix enumeration."""
    t = Fraction(t)
    _check_ceiling(d, t)
    amax, cmax = _bounds(d, t)
    # a = (C - A)/2, v = (C + A)/2 etc. give |entry| <= (amax + cmax)/2
    e = (amax + cmax) // 2 + 1
    n = d * d
    rng = range(-e, e + 1)
    found = set()
    for a in rng:
        for b in rng:
            for u in rng:
                if a:
                    num = n + b * u
                    if num % a:
                        continue
                    vs = [num // a]
                elif b * u == -n:
                    vs = rng
                else:
                    continue
                for v in vs:
                    if abs(v) > e:
                        continue
                    g = IntMat2(a, b, u, v)
                    if u_gamma_i(g) < t:
                        found.add(g.canonical())
    return len(found)


def count_M_quadruple(d: int, t) -> int:
    """Same count through parity-constrained quadruples, halved for the sign."""
    t = Fraction(t)
    _check_ceiling(d, t)
    amax, _ = _bounds(d, t)
    lim = 4 * d * d * t
    total = 0
    for A in range(-amax, amax + 1):
        for B in range(-amax, amax + 1):
            if A * A + B * B >= lim:
                continue
            total += _parity_reps(4 * d * d + A * A + B * B, A & 1, B & 1)
    if total % 2:
        raise ArithmeticError("odd quadruple count; sign pairing broken")
    return total // 2


def _parity_reps(n, pc, pd):
    out = 0
    r = isqrt(n)
    for C in range(-r, r + 1):
        if (C - pc) % 2:
            continue
        rest = n - C * C
        D = isqrt(rest)
        if D * D != rest or (D - pd) % 2:
            continue
        out += 1 if D == 0 else 2
    return out


def r_weighted_majorant(d: int, t) -> int:
    """sum over 0 <= n < 4 d^2 t of r2(n) r2(4 d^2 + n); n = 0 included with r2(0) = 1."""
    t = Fraction(t)
    if d < 1 or t <= 0:
        raise ValueError("need d >= 1 and t > 0")
    lim = 4 * d * d * t
    top = lim.__ceil__()
    return sum(r2(n) * r2(4 * d * d + n) for n in range(top) if n < lim)


def smallest_positive_u(d: int = 1, t_max=Fraction(4)) -> Fraction:
    """Smallest positive u(gamma i, i) over det-d^2 matrices with u < t_max."""
    t_max = Fraction(t_max)
    amax, _ = _bounds(d, t_max)
    best = None
    for A in range(-amax, amax + 1):
        for B in range(-amax, amax + 1):
            s = A * A + B * B
            if s == 0 or Fraction(s, 4 * d * d) >= t_max:
                continue
            if _parity_reps(4 * d * d + s, A & 1, B & 1):
                u = Fraction(s, 4 * d * d)
                if best is None or u < best:
                    best = u
    return best


# ---------------------------------------------------------------------------
# Hecke cosets


def hecke_coset_reps(m: int) -> list[tuple[int, int, int]]:
    """Upper-triangular (a, b, d) with a d = m, 0 <= b < d, ordered by decreasing a."""
    if m < 1:
        raise ValueError("m must be positive")
    out = []
    for a in reversed(factorize(m).divisors()):
        d = m // a
        out.extend((a, b, d) for b in range(d))
    return out


def _ext_gcd(x, y):
    # returns (g, s, t) with s x + t y = g >= 0
    s0, s1, t0, t1 = 1, 0, 0, 1
    while y:
        qt = x // y
        x, y = y, x - qt * y
        s0, s1 = s1, s0 - qt * s1
        t0, t1 = t1, t0 - qt * t1
    if x < 0:
        x, s0, t0 = -x, -s0, -t0
    return x, s0, t0


def reduce_to_rep(g: IntMat2) -> tuple[int, int, int]:
    """The triangular representative of the coset SL2(Z) g (sign ignored)."""
    m = g.det
    if m < 1:
        raise ValueError("determinant must be positive")
    h, s, t = _ext_gcd(g.a, g.u)
    # (s t; -u/h a/h) has det 1 and sends the first column to (h, 0)
    left = IntMat2(s, t, -g.u // h, g.a // h)
    top = left @ g
    a, b, d = top.a, top.b, top.v
    if top.u != 0 or a * d != m or a <= 0:
        raise ArithmeticError(f"column reduction failed for {g}")
    b %= d
    rep = IntMat2(a, b, 0, d)
    # uniqueness witness: rep g^{-1} must be unimodular
    cof = rep @ g.adjugate()
    if any(e % m for e in (cof.a, cof.b, cof.u, cof.v)):
        raise ArithmeticError("cofactor is not integral")
    unit = IntMat2(cof.a // m, cof.b // m, cof.u // m, cof.v // m)
    if unit.det != 1:
        raise ArithmeticError("cofactor is not unimodular")
    return a, b, d


def partition_check(m: int, box: int = 5) -> bool:
    """Every det-m matrix with entries in [-box, box] lands on a representative, and
    two of them are SL2(Z)-equivalent (up to sign) exactly when they land on the same one."""
    rng = np.arange(-box, box + 1)
    a, b, u, v = (x.ravel() for x in np.meshgrid(rng, rng, rng, rng, indexing="ij"))
    keep = a * v - b * u == m
    a, b, u, v = a[keep], b[keep], u[keep], v[keep]
    reps = [reduce_to_rep(IntMat2(int(w), int(x), int(y), int(z))) for w, x, y, z in zip(a, b, u, v)]
    valid = set(hecke_coset_reps(m))
    if not set(reps) <= valid:
        return False
    label = np.array([sorted(valid).index(r) for r in reps])
    # g1 g2^{-1} = g1 adj(g2) / m integral  <=>  equivalent
    p11 = np.outer(a, v) - np.outer(b, u)
    p12 = -np.outer(a, b) + np.outer(b, a)
    p21 = np.outer(u, v) - np.outer(v, u)
    p22 = -np.outer(u, b) + np.outer(v, a)
    equiv = (p11 % m == 0) & (p12 % m == 0) & (p21 % m == 0) & (p22 % m == 0)
    same = label[:, None] == label[None, :]
    return bool(np.array_equal(equiv, same))


# ---------------------------------------------------------------------------
# base point transfer


@dataclass(frozen=True)
class OrbitReport:
    gamma0: IntMat2
    max_error: float
    samples: int

    @property
    def ok(self) -> bool:
        return self.max_error < 1e-12


def find_orbit_map(target=complex(-0.5, 0.5), bound: int = 2) -> IntMat2:
    """Smallest-entry gamma0 in SL2(Z) with gamma0 i = (i - 1)/2, found by search.

    gamma0 i = target exactly iff 2(a i + b) = (i - 1)(u i + v).
    """
    rng = range(-bound, bound + 1)
    for a in rng:
        for b in rng:
            for u in rng:
                for v in rng:
                    if a * v - b * u != 1:
                        continue
                    if 2 * b == -u - v and 2 * a == v - u:
                        g = IntMat2(a, b, u, v)
                        if abs(g.act(1j) - target) < 1e-15:
                            return g
    raise LookupError("no orbit map in the search box")


def z0_orbit_transfer(samples: int = 100, seed: int = 0) -> OrbitReport:
    """u(g g0 i, g0 i) against u(g0^{-1} g g0 i, i) for random small g."""
    g0 = find_orbit_map()
    g0inv = g0.adjugate()
    rnd = random.Random(seed)
    z0 = g0.act(1j)
    worst = 0.0
    done = 0
    while done < samples:
        g = IntMat2(*(rnd.randint(-6, 6) for _ in range(4)))
        if g.det <= 0:
            continue
        conj = g0inv @ g @ g0
        if conj.det != g.det:
            raise ArithmeticError("conjugation changed the determinant")
        lhs = u_dist(g.act(z0), z0)
        rhs = u_dist(conj.act(1j), 1j)
        worst = max(worst, abs(lhs - rhs) / max(1.0, abs(lhs)))
        done += 1
    return OrbitReport(g0, worst, samples)


def u_crosscheck(g: IntMat2) -> float:
    """|u_gamma_i(g) - u_dist(g i, i)| in floating point."""
    return abs(float(u_gamma_i(g)) - u_dist(g.act(1j), 1j))

