from math import isqrt

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from shiftconv import arith


def brute_r2(n):
    r = isqrt(n)
    return sum(1 for a in range(-r, r + 1) for b in range(-r, r + 1) if a * a + b * b == n)


def brute_tau(n):
    return sum(1 for d in range(1, n + 1) if n % d == 0)


def test_r2_small_values():
    assert [arith.r2(n) for n in range(0, 11)] == [1, 4, 4, 0, 4, 8, 0, 0, 4, 4, 8]
    assert arith.r2(25) == 12
    assert arith.r2(10**6) == 28


def test_sigma_tau_chi4():
    assert [arith.sigma(n) for n in (1, 2, 6, 12, 28)] == [1, 3, 12, 28, 56]
    assert [arith.tau(n) for n in (1, 2, 6, 12, 36)] == [1, 2, 4, 6, 9]
    assert [arith.chi4(n) for n in range(1, 9)] == [1, 0, -1, 0, 1, 0, -1, 0]
    assert arith.two_adic(48) == (4, 3)


@given(st.integers(1, 3000))
def test_r2_matches_pair_enumeration(n):
    assert arith.r2(n) == brute_r2(n) == arith.divisor_sum_r2(n)


@given(st.integers(1, 5000))
def test_tau_matches_trial_division(n):
    assert arith.tau(n) == brute_tau(n)


@given(st.integers(1, (1 << 63) - 1))
@settings(max_examples=200, deadline=None)
def test_factorization_multiplies_back(n):
    f = arith.factorize(n)
    prod = 1
    for p, e in f.factors:
        assert arith._is_probable_prime(p)
        prod *= p**e
    assert prod == n


def test_factorize_edge_cases():
    assert arith.factorize(1).factors == ()
    assert arith.factorize((1 << 61) - 1).factors == (((1 << 61) - 1, 1),)
    assert arith.factorize(2**40 * 3).factors == ((2, 40), (3, 1))
    with pytest.raises(ValueError):
        arith.factorize(0)
    with pytest.raises(ValueError):
        arith.factorize(1 << 63)


def test_table_against_scalar():
    t = arith.r2_table(1, 5000)
    assert [t[n] for n in range(1, 5001)] == [arith.r2(n) for n in range(1, 5001)]
    d = arith.tau_table(1, 3000)
    assert d.values.tolist() == [brute_tau(n) for n in range(1, 3001)]


@given(st.integers(1, 10**9), st.integers(0, 5000), st.sampled_from([1024, 2048, 5000]))
@settings(max_examples=40, deadline=None)
def test_window_and_segment_invariance(lo, span, seg):
    hi = lo + span
    t = arith.r2_table(lo, hi, segment_size=seg)
    assert t.values.tolist() == [arith.r2(n) for n in range(lo, hi + 1)]


def test_workers_do_not_change_table():
    a = arith.r2_table(1, 300_000, segment_size=1 << 12, workers=1)
    b = arith.r2_table(1, 300_000, segment_size=1 << 12, workers=8)
    assert a == b


def test_dump_round_trip(tmp_path):
    t = arith.tau_table(100, 2000)
    p = tmp_path / "t.rtb"
    t.dump(p)
    back = arith.RTable.load(p)
    assert back == t and back.kind is arith.TableKind.TAU
    with pytest.raises(ValueError):
        arith.RTable.from_bytes(b"XXXX" + t.to_bytes()[4:])
    with pytest.raises(ValueError):
        arith.RTable.from_bytes(t.to_bytes()[:-4])


def test_table_errors():
    with pytest.raises(ValueError):
        arith.r2_table(0, 10)
    with pytest.raises(ValueError):
        arith.r2_table(10, 5)
    with pytest.raises(ValueError):
        arith.r2_table(1, 10, segment_size=16)
    with pytest.raises(arith.CapacityError):
        arith.r2_table(1, (1 << 50) + 1)
    with pytest.raises(arith.CapacityError):
        arith.r2_table(1, 1 << 32)
    t = arith.r2_table(5, 10)
    with pytest.raises(IndexError):
        t[4]


def test_table_values_dtype():
    t = arith.r2_table(1, 100)
    assert t.values.dtype == np.int32 and len(t) == 100
