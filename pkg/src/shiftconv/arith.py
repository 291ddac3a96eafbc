"""Exact arithmetic for multiplicative functions and segmented r2/tau tables."""

from __future__ import annotations

import enum
import math
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import gcd, isqrt

import numpy as np

from . import _backend

MAX_N = (1 << 63) - 1
TABLE_CEILING = 1 << 50
MIN_SEGMENT = 1 << 10
# 2**31 int32 cells is 8 GiB; anything larger is refused outright
MAX_TABLE_LEN = 1 << 31


class CapacityError(MemoryError):
    """Requested table window cannot be materialized."""


# ---------------------------------------------------------------------------
# factorization

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _is_probable_prime(n):
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # these bases are deterministic for n < 3.3e24
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n):
    if n % 2 == 0:
        return 2
    c = 1
    while True:
        y, r, q, g = 2, 1, 1, 1
        f = lambda v: (v * v + c) % n
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = f(y)
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(128, r - k)):
                    y = f(y)
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += 128
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = f(ys)
                g = gcd(abs(x - ys), n)
        if g != n:
            return g
        c += 1


@dataclass(frozen=True)
class Factorization:
    n: int
    factors: tuple  # ((prime, exponent), ...) sorted by prime

    def __post_init__(self):
        prod = 1
        last = 0
        for p, e in self.factors:
            if p <= last or e < 1:
                raise ValueError(f"malformed factorization {self.factors}")
            last = p
            prod *= p**e
        if prod != self.n:
            raise ValueError(f"factors do not multiply to {self.n}")

    def divisors(self):
        divs = [1]
        for p, e in self.factors:
            divs = [d * p**k for d in divs for k in range(e + 1)]
        return sorted(divs)


SPF_LIMIT = 1 << 21
_spf_cache = None


def _spf():
    """Smallest-prime-factor list for n < SPF_LIMIT, built on first use."""
    global _spf_cache
    if _spf_cache is None:
        spf = np.zeros(SPF_LIMIT, dtype=np.int32)
        for p in range(2, isqrt(SPF_LIMIT - 1) + 1):
            if spf[p] == 0:
                block = spf[p * p :: p]
                block[block == 0] = p
        idx = np.nonzero(spf == 0)[0]
        spf[idx] = idx
        _spf_cache = spf.tolist()
    return _spf_cache


def factorize(n: int) -> Factorization:
    if n < 1:
        raise ValueError("factorize requires n >= 1")
    if n > MAX_N:
        raise ValueError("factorize supports n <= 2**63 - 1")
    if n < SPF_LIMIT:
        spf = _spf()
        out = []
        k = n
        while k > 1:
            p = spf[k]
            e = 0
            while k % p == 0:
                k //= p
                e += 1
            out.append((p, e))
        return Factorization(n, tuple(out))
    counts: dict[int, int] = {}
    m = n
    for p in (2, 3, 5):
        while m % p == 0:
            counts[p] = counts.get(p, 0) + 1
            m //= p
    p = 7
    while p * p <= m and p < 1000:
        while m % p == 0:
            counts[p] = counts.get(p, 0) + 1
            m //= p
        p += 2
    stack = [m] if m > 1 else []
    while stack:
        k = stack.pop()
        if _is_probable_prime(k):
            counts[k] = counts.get(k, 0) + 1
            continue
        r = isqrt(k)
        if r * r == k:
            stack += [r, r]
            continue
        f = _pollard_brent(k)
        stack += [f, k // f]
    return Factorization(n, tuple(sorted(counts.items())))


def two_adic(m: int) -> tuple[int, int]:
    """Return (k, odd) with m = 2**k * odd."""
    if m < 1:
        raise ValueError("two_adic requires m >= 1")
    k = (m & -m).bit_length() - 1
    return k, m >> k


def sigma(n: int) -> int:
    out = 1
    for p, e in factorize(n).factors:
        out *= (p ** (e + 1) - 1) // (p - 1)
    return out


def tau(n: int) -> int:
    return math.prod(e + 1 for _, e in factorize(n).factors)


def chi4(n: int) -> int:
    if n % 2 == 0:
        return 0
    return 1 if n % 4 == 1 else -1


def r2(n: int) -> int:
    """Ordered pairs (a, b) of integers with a*a + b*b == n; r2(0) = 1."""
    if n < 0:
        raise ValueError("r2 requires n >= 0")
    if n == 0:
        return 1
    # 4 * sum_{d | n} chi4(d), evaluated through the factorization
    out = 4
    for p, e in factorize(n).factors:
        if p % 4 == 1:
            out *= e + 1
        elif p % 4 == 3 and e % 2:
            return 0
    return out


def divisor_sum_r2(n: int) -> int:
    """r2(n) straight from 4 * sum_{d | n} chi4(d) (slower; used for cross-checks)."""
    if n == 0:
        return 1
    return 4 * sum(chi4(d) for d in factorize(n).divisors())


# ---------------------------------------------------------------------------
# tables


class TableKind(enum.IntEnum):
    R2 = 0
    TAU = 1


_MAGIC = b"RTB1"
_HEADER = struct.Struct("<4sBQQ")


@dataclass(eq=False)
class RTable:
    """Dense window of r2 or tau values; values[i] = f(lo + i)."""

    lo: int
    hi: int
    values: np.ndarray
    kind: TableKind

    def __post_init__(self):
        if len(self.values) != self.hi - self.lo + 1:
            raise ValueError("table length does not match window")

    def __len__(self):
        return self.hi - self.lo + 1

    def __getitem__(self, n):
        if not self.lo <= n <= self.hi:
            raise IndexError(f"{n} outside table window [{self.lo}, {self.hi}]")
        return int(self.values[n - self.lo])

    def covers(self, a, b):
        return self.lo <= a and b <= self.hi

    def __eq__(self, other):
        if not isinstance(other, RTable):
            return NotImplemented
        return (
            (self.lo, self.hi, self.kind) == (other.lo, other.hi, other.kind)
            and np.array_equal(self.values, other.values)
        )

    def to_bytes(self) -> bytes:
        head = _HEADER.pack(_MAGIC, int(self.kind), self.lo, self.hi)
        return head + self.values.astype("<u4").tobytes()

    @classmethod
    def from_bytes(cls, blob: bytes) -> "RTable":
        magic, kind, lo, hi = _HEADER.unpack_from(blob)
        if magic != _MAGIC:
            raise ValueError("not an RTB1 table dump")
        body = np.frombuffer(blob, dtype="<u4", offset=_HEADER.size)
        if len(body) != hi - lo + 1:
            raise ValueError("truncated RTB1 table dump")
        return cls(lo, hi, body.astype(np.int32), TableKind(kind))

    def dump(self, path):
        with open(path, "wb") as fh:
            fh.write(self.to_bytes())

    @classmethod
    def load(cls, path) -> "RTable":
        with open(path, "rb") as fh:
            return cls.from_bytes(fh.read())


def _build_table(fill, kind, lo, hi, segment_size, workers):
    if lo < 1 or hi < lo:
        raise ValueError("table window requires 1 <= lo <= hi")
    if hi > TABLE_CEILING:
        raise CapacityError(f"hi={hi} exceeds the 2**50 table ceiling")
    if segment_size < MIN_SEGMENT:
        raise ValueError(f"segment_size must be >= {MIN_SEGMENT}")
    length = hi - lo + 1
    if length > MAX_TABLE_LEN:
        raise CapacityError(f"window of {length} cells exceeds {MAX_TABLE_LEN}")
    try:
        values = np.empty(length, dtype=np.int32)
    except MemoryError as exc:
        raise CapacityError(f"cannot allocate {length} table cells") from exc

    starts = range(lo, hi + 1, segment_size)

    def work(s):
        e = min(hi, s + segment_size - 1)
        fill(s, e, values[s - lo : e - lo + 1])

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            list(pool.map(work, starts))
    else:
        for s in starts:
            work(s)
    return RTable(lo, hi, values, kind)


def r2_table(lo: int, hi: int, segment_size: int = 1 << 16, workers: int = 1) -> RTable:
    return _build_table(_backend.r2_fill, TableKind.R2, lo, hi, segment_size, workers)


def tau_table(lo: int, hi: int, segment_size: int = 1 << 16, workers: int = 1) -> RTable:
    return _build_table(_backend.tau_fill, TableKind.TAU, lo, hi, segment_size, workers)
