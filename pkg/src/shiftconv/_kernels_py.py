"""Numpy fallback for the compiled kernels (same signatures, same results)."""

from math import isqrt

import numpy as np

_CHI4 = np.array([0, 1, 0, -1], dtype=np.int32)


def _chi4(k):
    if k % 2 == 0:
        return 0
    return 1 if k % 4 == 1 else -1


def r2_fill(lo, hi, out):
    """Write r2(n) for lo <= n <= hi into out[0 : hi - lo + 1]."""
    n_vals = hi - lo + 1
    if out.shape[0] < n_vals:
        raise ValueError("output buffer too small")
    acc = out[:n_vals]
    acc[:] = 0
    for d in range(1, isqrt(hi) + 1):
        q0 = max(d, -(-lo // d))
        q1 = hi // d
        if q1 < q0:
            continue
        q = np.arange(q0, q1 + 1, dtype=np.int64)
        start = d * q0 - lo
        acc[start : start + d * (q1 - q0) + 1 : d] += _CHI4[q & 3] + _chi4(d)
        if q0 == d:
            acc[start] -= _chi4(d)
    acc *= 4


def tau_fill(lo, hi, out):
    """Write tau(n) for lo <= n <= hi into out[0 : hi - lo + 1]."""
    n_vals = hi - lo + 1
    if out.shape[0] < n_vals:
        raise ValueError("output buffer too small")
    acc = out[:n_vals]
    acc[:] = 0
    for d in range(1, isqrt(hi) + 1):
        q0 = max(d, -(-lo // d))
        q1 = hi // d
        if q1 < q0:
            continue
        start = d * q0 - lo
        acc[start : start + d * (q1 - q0) + 1 : d] += 2
        if q0 == d:
            acc[start] -= 1


_CHUNK = 1 << 20
_U64_MAX = (1 << 64) - 1


def shifted_dot(values, i0, j0, length):
    """Sum of values[i0 + k] * values[j0 + k] for 0 <= k < length."""
    if length <= 0:
        return 0
    if i0 < 0 or j0 < 0 or i0 + length > values.shape[0] or j0 + length > values.shape[0]:
        raise IndexError("shifted_dot range outside table")
    total = 0
    for off in range(0, length, _CHUNK):
        n = min(_CHUNK, length - off)
        a = values[i0 + off : i0 + off + n].astype(np.int64)
        b = values[j0 + off : j0 + off + n].astype(np.int64)
        # int32 products fit in int64; cap the run length so partial sums do too
        top = int(np.abs(a).max()) * int(np.abs(b).max())
        step = n if top * n < 2**63 else max(1, (2**63 - 1) // max(top, 1))
        for k in range(0, n, step):
            total += int(np.dot(a[k : k + step], b[k : k + step]))
        if total > _U64_MAX:
            raise OverflowError("64-bit accumulator overflow in shifted_dot")
    return total
