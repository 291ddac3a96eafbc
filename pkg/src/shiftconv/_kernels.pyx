# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: segmented divisor-pair sieves and exact shifted dot products.

Both sieves walk divisor pairs (d, q) with d <= q and d*q in the segment, so each
segment costs O(L log sqrt(hi) + sqrt(hi)) regardless of where it sits.
"""

from libc.math cimport sqrt
from libc.stdint cimport int32_t, int64_t, uint64_t


cdef inline int _chi4(int64_t k) noexcept nogil:
    # 0 for even k, +1 for k = 1 (mod 4), -1 for k = 3 (mod 4); branch-free
    return <int>((k & 1) * (2 - (k & 3)))


cdef int64_t _isqrt(int64_t n) noexcept nogil:
    cdef int64_t r = <int64_t>sqrt(<double>n)
    while r * r > n:
        r -= 1
    while (r + 1) * (r + 1) <= n:
        r += 1
    return r


def r2_fill(int64_t lo, int64_t hi, int32_t[::1] out):
    """Write r2(n) for lo <= n <= hi into out[0 : hi - lo + 1]."""
    cdef int64_t n_vals = hi - lo + 1
    cdef int64_t i, d, q, q0, n, root
    cdef int cd
    if out.shape[0] < n_vals:
        raise ValueError("output buffer too small")
    cdef int32_t* o = &out[0]
    with nogil:
        for i in range(n_vals):
            o[i] = 0
        root = _isqrt(hi)
        for d in range(1, root + 1):
            cd = _chi4(d)
            q0 = (lo + d - 1) // d
            if q0 < d:
                q0 = d
            if q0 == d:
                # square divisor pair counted once
                o[d * d - lo] += cd
                q0 += 1
            n = d * q0
            q = q0
            while n <= hi:
                o[n - lo] += cd + _chi4(q)
                q += 1
                n += d
        for i in range(n_vals):
            o[i] *= 4
    return None


def tau_fill(int64_t lo, int64_t hi, int32_t[::1] out):
    """Write tau(n) for lo <= n <= hi into out[0 : hi - lo + 1]."""
    cdef int64_t n_vals = hi - lo + 1
    cdef int64_t i, d, q, q0, n, root
    if out.shape[0] < n_vals:
        raise ValueError("output buffer too small")
    cdef int32_t* o = &out[0]
    with nogil:
        for i in range(n_vals):
            o[i] = 0
        root = _isqrt(hi)
        for d in range(1, root + 1):
            q0 = (lo + d - 1) // d
            if q0 < d:
                q0 = d
            if q0 == d:
                o[d * d - lo] += 1
                q0 += 1
            n = d * q0
            while n <= hi:
                o[n - lo] += 2
                n += d
    return None


def shifted_dot(const int32_t[::1] values, int64_t i0, int64_t j0, int64_t length):
    """Sum of values[i0 + k] * values[j0 + k] for 0 <= k < length.

    Values must be nonnegative. Raises OverflowError instead of wrapping.
    """
    cdef uint64_t acc = 0, p
    cdef uint64_t limit = <uint64_t>0xFFFFFFFFFFFFFFFF
    cdef int64_t k
    cdef bint overflow = False
    if length <= 0:
        return 0
    if i0 < 0 or j0 < 0 or i0 + length > values.shape[0] or j0 + length > values.shape[0]:
        raise IndexError("shifted_dot range outside table")
    with nogil:
        for k in range(length):
            p = <uint64_t>values[i0 + k] * <uint64_t>values[j0 + k]
            if acc > limit - p:
                overflow = True
                break
            acc += p
    if overflow:
        raise OverflowError("64-bit accumulator overflow in shifted_dot")
    return int(acc)
