"""Exact shifted convolutions S(x,m), D(x,m) and the lattice-count identities.

All sums run over 1 <= n <= x. The lattice oracles count integer 4-tuples
(a, b, c, d) with 1 <= c^2 + d^2 <= x and a^2 + b^2 - c^2 - d^2 = m; the
representation counts they use come from pair enumeration, never from the
divisor-sum sieve, so the two routes are independent.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt

import numpy as np

from . import _backend
from .arith import RTable, TableKind, two_adic

DESK_CEILING = 10**5


class Method(enum.Enum):
    TABLE = "table"
    LATTICE = "lattice"


@dataclass(frozen=True)
class ConvolutionRecord:
    x: int
    m: int
    s_value: int
    method: Method

    def __post_init__(self):
        if self.m >= 1 and self.s_value % 16:
            raise ValueError(f"S({self.x},{self.m})={self.s_value} is not divisible by 16")


def _check_cover(x, m, table, kind):
    if table.kind != kind:
        raise ValueError(f"expected a {kind.name} table, got {table.kind.name}")
    if x < 0 or m < 1:
        raise ValueError("need x >= 0 and m >= 1")
    if x >= 1 and not table.covers(1, x + m):
        raise ValueError(f"table [{table.lo}, {table.hi}] does not cover [1, {x + m}]")


def _dot(x, m, table):
    if x == 0:
        return 0
    i0 = 1 - table.lo
    return _backend.shifted_dot(table.values, i0, i0 + m, x)


def shifted_sum(x: int, m: int, table: RTable) -> int:
    """S(x, m) = sum_{n <= x} r(n) r(n + m), exact."""
    _check_cover(x, m, table, TableKind.R2)
    return _dot(x, m, table)


def divisor_shifted_sum(x: int, m: int, table: RTable) -> int:
    """D(x, m) = sum_{n <= x} tau(n) tau(n + m), exact."""
    _check_cover(x, m, table, TableKind.TAU)
    return _dot(x, m, table)


def shifted_sums_at(xs, m, table, workers=1):
    """S(x, m) (or D) for every x in the increasing list xs.

    The index range is cut at the sample points and the partial sums are
    reduced in order, so the result does not depend on `workers`.
    """
    xs = list(xs)
    if any(b <= a for a, b in zip(xs, xs[1:])):
        raise ValueError("x points must be strictly increasing")
    if not xs:
        return []
    _check_cover(xs[-1], m, table, table.kind)
    bounds = [0] + xs
    i0 = 1 - table.lo

    def part(k):
        a, b = bounds[k], bounds[k + 1]
        return _backend.shifted_dot(table.values, i0 + a, i0 + a + m, b - a)

    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(part, range(len(xs))))
    else:
        parts = [part(k) for k in range(len(xs))]
    out, acc = [], 0
    for p in parts:
        acc += p
        out.append(acc)
    return out


# ---------------------------------------------------------------------------
# lattice enumeration


@lru_cache(maxsize=8)
def _pair_counts(limit):
    """counts[pa, pb, n] = #{(a, b): a^2 + b^2 = n, a = pa, b = pb (mod 2)} for n <= limit."""
    r = isqrt(limit)
    a = np.arange(-r, r + 1, dtype=np.int64)
    aa, bb = np.meshgrid(a, a, indexing="ij")
    n = (aa * aa + bb * bb).ravel()
    keep = n <= limit
    n = n[keep]
    cls = ((aa.ravel()[keep] & 1) * 2 + (bb.ravel()[keep] & 1)).astype(np.int64)
    flat = np.bincount(cls * (limit + 1) + n, minlength=4 * (limit + 1))
    counts = flat.reshape(2, 2, limit + 1).astype(np.int64)
    counts.setflags(write=False)
    return counts


@lru_cache(maxsize=8)
def _disk(xmax):
    """Points (c, d) with 1 <= c^2 + d^2 <= xmax: (n, c mod 2, d mod 2)."""
    r = isqrt(xmax)
    c = np.arange(-r, r + 1, dtype=np.int64)
    cc, dd = np.meshgrid(c, c, indexing="ij")
    n = (cc * cc + dd * dd).ravel()
    keep = (n >= 1) & (n <= xmax)
    return n[keep], (cc.ravel()[keep] & 1), (dd.ravel()[keep] & 1)


def _check_desk(x, m):
    if x < 0 or m < 1:
        raise ValueError("need x >= 0 and m >= 1")
    if x > DESK_CEILING:
        raise ValueError(f"x={x} is over the enumeration ceiling {DESK_CEILING}")


def _round_limit(v):
    # share cached enumerations between nearby requests
    return 1 << max(6, (v - 1).bit_length())


def lattice_count_C_upto(xmax: int, m: int) -> np.ndarray:
    """#C(x, m) for x = 0..xmax by 4-tuple enumeration (index = x)."""
    _check_desk(xmax, m)
    out = np.zeros(xmax + 1, dtype=np.int64)
    if xmax == 0:
        return out
    reps = _pair_counts(_round_limit(xmax + m)).sum(axis=(0, 1))
    n, _, _ = _disk(xmax)
    np.add.at(out, n, reps[n + m])
    return np.cumsum(out)


def a_count_upto(xmax: int, m: int) -> np.ndarray:
    """A(x, m) for x = 0..xmax: tuples of C(x, m) with a = c, b = d (mod 2)."""
    _check_desk(xmax, m)
    out = np.zeros(xmax + 1, dtype=np.int64)
    if xmax == 0:
        return out
    counts = _pair_counts(_round_limit(xmax + m))
    n, pc, pd = _disk(xmax)
    np.add.at(out, n, counts[pc, pd, n + m])
    return np.cumsum(out)


def lattice_count_C(x: int, m: int) -> int:
    return int(lattice_count_C_upto(x, m)[x])


def a_count(x: int, m: int) -> int:
    return int(a_count_upto(x, m)[x])


def brute_force_S(x: int, m: int) -> int:
    """Literal 4-tuple loop over a bounding box. Tiny x only."""
    if x > 400:
        raise ValueError("brute_force_S is for x <= 400")
    count = 0
    rc = isqrt(x)
    rab = isqrt(x + m)
    for c in range(-rc, rc + 1):
        for d in range(-rc, rc + 1):
            n = c * c + d * d
            if n < 1 or n > x:
                continue
            for a in range(-rab, rab + 1):
                for b in range(-rab, rab + 1):
                    if a * a + b * b - n == m:
                        count += 1
    return count


# ---------------------------------------------------------------------------
# even-m reductions


def _require_even(m):
    if m < 1 or m % 2:
        raise ValueError(f"m={m} must be a positive even integer")


def a_tilde(x: int, m: int) -> Fraction:
    """A(x,m) when 4 | m, else S(x/2, m/2) / 2."""
    _require_even(m)
    if m % 4 == 0:
        return Fraction(a_count(x, m))
    return Fraction(lattice_count_C(x // 2, m // 2), 2)


def parity_identity_check(x: int, m: int) -> bool:
    """S(x,m) against S(x/2,m/2) (4 does not divide m) or 2A(x,m) - S(x/2,m/2)."""
    _require_even(m)
    s = lattice_count_C(x, m)
    half = lattice_count_C(x // 2, m // 2)
    if m % 4:
        return s == half
    return s == 2 * a_count(x, m) - half


def lemma_sa_check(x: int, m: int) -> bool:
    """S(x,m) = 2 sum_{j<k} (-1)^j Atilde(x/2^j, m/2^j) with 2^k || m."""
    _require_even(m)
    k, _ = two_adic(m)
    total = sum((-1) ** j * a_tilde(x >> j, m >> j) for j in range(k))
    doubled = 2 * total
    if doubled.denominator != 1:
        raise ArithmeticError(f"non-integral alternating sum at x={x}, m={m}")
    return int(doubled) == lattice_count_C(x, m)


def identity_checks_upto(xmax: int, m: int) -> tuple[bool, bool]:
    """Both even-m identities for every 0 <= x <= xmax at once."""
    _require_even(m)
    xs = np.arange(xmax + 1)
    s = lattice_count_C_upto(xmax, m)
    half = lattice_count_C_upto(xmax // 2, m // 2)[xs // 2]
    if m % 4:
        parity = bool(np.array_equal(s, half))
    else:
        parity = bool(np.array_equal(s, 2 * a_count_upto(xmax, m) - half))

    k, _ = two_adic(m)
    # twice Atilde(x >> j, m >> j), kept integral
    rhs = np.zeros(xmax + 1, dtype=np.int64)
    for j in range(k):
        mj = m >> j
        xj = xs >> j
        if mj % 4 == 0:
            term = 2 * a_count_upto(xmax >> j, mj)[xj]
        else:
            term = lattice_count_C_upto(xmax >> (j + 1), mj // 2)[xj // 2]
        rhs += (-1) ** j * term
    return parity, bool(np.array_equal(s, rhs))
