from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from shiftconv import main_term as mt
from shiftconv.arith import factorize


def test_coefficients():
    assert mt.main_coefficient(1) == 8
    assert mt.main_coefficient(2) == 8
    assert mt.main_coefficient(4) == 40
    assert mt.main_coefficient_compact(4) == 40
    assert mt.main_coefficient(6) == 32
    assert mt.main_coefficient_sigma2k(12) == mt.main_coefficient(12) == 160
    with pytest.raises(ValueError):
        mt.main_coefficient_sigma2k(5)


@given(st.integers(1, 20000))
def test_dual_forms(m):
    c = mt.main_coefficient(m)
    # direct divisor loop, written out without the library helpers
    direct = 8 * sum((d if (m + d) % 2 == 0 else -d) for d in range(1, m + 1) if m % d == 0)
    assert c == mt.main_coefficient_compact(m) == direct
    if m % 2 == 0:
        assert c == mt.main_coefficient_sigma2k(m)


def test_main_and_error_term():
    assert mt.main_term(100, 4).value == 1000
    assert mt.main_term(10, 1).value == 80
    rec = mt.error_term(10, 1, 96)
    assert rec.e_value == 16 and rec.main == 80
    with pytest.raises(ValueError):
        mt.ErrorRecord(10, 1, 96, Fraction(80), Fraction(15))
    with pytest.raises(ValueError):
        mt.main_term(-1, 1)


def test_spectral_constants():
    c = mt.constant_eigen_term(mt.Group.PSL2Z, 5)
    assert (c.rational, c.pi_power, c.sqrt_m_power) == (18, -1, -1)  # 3 sigma(5)
    assert mt.constant_eigen_term(mt.Group.GAMMA0_2, 5).rational == 6
    s = mt.spectral_main_coefficient(mt.Group.PSL2Z, 1)
    assert (s.rational, s.pi_power, s.sqrt_m_power) == (24, 0, 0)
    assert mt.spectral_main_coefficient(mt.Group.GAMMA0_2, 3).rational == 32


@given(st.integers(0, 200).map(lambda k: 2 * k + 1))
def test_spectral_odd_m_matches_main(m):
    # for odd m the constant-eigenfunction contribution is the main coefficient
    assert mt.spectral_main_coefficient(mt.Group.GAMMA0_2, m).rational == mt.main_coefficient(m)


def test_even_m_consistency_and_sieve():
    assert mt.even_m_consistency(2000)
    first, compact = mt.main_coefficients_upto(3000)
    assert all(first[m] == mt.main_coefficient(m) for m in range(1, 3001))
    assert (first[1:] == compact[1:]).all()
    with pytest.raises(ValueError):
        mt.even_m_consistency(1)


def test_positive_coefficient():
    assert min(mt.main_coefficient(m) for m in range(1, 500)) >= 8
    assert factorize(1).divisors() == [1]
