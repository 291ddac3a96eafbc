"""Main term of S(x, m) in both closed forms, spectral constants and E(x, m)."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arith import factorize, sigma, two_adic


@dataclass(frozen=True)
class MainTermValue:
    coefficient: Fraction
    x: int
    m: int
    value: Fraction


@dataclass(frozen=True)
class ErrorRecord:
    x: int
    m: int
    s_value: int
    main: Fraction
    e_value: Fraction

    def __post_init__(self):
        if self.e_value + self.main != self.s_value:
            raise ValueError("error record does not reconstruct S exactly")


def main_coefficient(m: int) -> Fraction:
    """8 |2^(k+1) - 3| sigma(m / 2^k), the coefficient of x/m."""
    k, odd = two_adic(m)
    return Fraction(8 * abs(2 ** (k + 1) - 3) * sigma(odd))


def main_coefficient_compact(m: int) -> Fraction:
    """8 sum_{d | m} (-1)^(m+d) d."""
    if m < 1:
        raise ValueError("m must be positive")
    total = sum(d if (m + d) % 2 == 0 else -d for d in factorize(m).divisors())
    return Fraction(8 * total)


def main_coefficient_sigma2k(m: int) -> Fraction:
    """8 (sigma(2^k) - 2) sigma(m / 2^k); only meaningful for even m."""
    k, odd = two_adic(m)
    if k == 0:
        raise ValueError("the sigma(2^k) - 2 form needs m even")
    return Fraction(8 * (2 ** (k + 1) - 1 - 2) * sigma(odd))


def main_term(x: int, m: int) -> MainTermValue:
    if x < 0:
        raise ValueError("x must be nonnegative")
    c = main_coefficient(m)
    return MainTermValue(c, x, m, c * x / m)


def error_term(x: int, m: int, s_value: int) -> ErrorRecord:
    main = main_term(x, m).value
    return ErrorRecord(x, m, s_value, main, s_value - main)


class Group(enum.Enum):
    PSL2Z = "PSL2Z"
    GAMMA0_2 = "GAMMA0_2"


@dataclass(frozen=True)
class SpectralConstant:
    """rational * pi**pi_power * m**(sqrt_m_power / 2)."""

    rational: Fraction
    pi_power: int
    sqrt_m_power: int = 0


# fundamental-domain area of each group in units of pi
_AREA_OVER_PI = {Group.PSL2Z: Fraction(1, 3), Group.GAMMA0_2: Fraction(1)}


def constant_eigen_term(group: Group, m: int) -> SpectralConstant:
    """lambda_0(m) |u_0|^2 = sigma(m) / (sqrt(m) * area): 3 sigma(m)/(pi sqrt m) for PSL2(Z)."""
    return SpectralConstant(Fraction(sigma(m)) / _AREA_OVER_PI[group], -1, -1)


def spectral_main_coefficient(group: Group, m: int) -> SpectralConstant:
    """Coefficient of x/m in A(4x,4m) (PSL2Z) or S(x,m) for odd m (GAMMA0_2).

    The constant eigenfunction contributes 2 sqrt(m) * lambda_0 |u_0|^2 * 4 pi y
    with y = x/m; the pi and sqrt(m) factors cancel.
    """
    c = constant_eigen_term(group, m)
    return SpectralConstant(2 * 4 * c.rational, c.pi_power + 1, c.sqrt_m_power + 1)


def even_m_consistency(mmax: int) -> bool:
    if mmax < 2:
        raise ValueError("mmax must be >= 2")
    for m in range(2, mmax + 1, 2):
        k, odd = two_adic(m)
        if abs(2 ** (k + 1) - 3) != sigma(2**k) - 2:
            return False
        c = main_coefficient(m)
        if c != main_coefficient_sigma2k(m) or c != main_coefficient_compact(m):
            return False
    return True


def main_coefficients_upto(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Both coefficient forms for m = 0..n by independent sieves (index 0 unused).

    First array: 8 |2^(k+1) - 3| sigma(odd part). Second: 8 sum_{d|m} (-1)^(m+d) d.
    """
    sig = np.zeros(n + 1, dtype=np.int64)
    signed = np.zeros(n + 1, dtype=np.int64)
    for d in range(1, n + 1):
        sig[d::d] += d
        mult = np.arange(d, n + 1, d)
        # (-1)^(m+d) is +1 exactly when m and d have the same parity
        signed[d::d] += np.where((mult - d) % 2 == 0, d, -d)
    m = np.arange(n + 1)
    m[0] = 1
    k = np.zeros(n + 1, dtype=np.int64)
    odd = m.copy()
    while np.any(odd % 2 == 0):
        ev = odd % 2 == 0
        odd[ev] //= 2
        k[ev] += 1
    first = 8 * np.abs(2 ** (k + 1) - 3) * sig[odd]
    return first, 8 * signed
