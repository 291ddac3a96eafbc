"""Compiled kernels against the numpy fallback: sieve fill and shifted dot throughput.

    python benchmarks/bench_kernels.py --sizes 1e6 1e7 --repeat 3
"""

import argparse
import time

import numpy as np

from shiftconv import _backend
from shiftconv._kernels_py import r2_fill as py_r2, shifted_dot as py_dot, tau_fill as py_tau


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def segmented(fill, n, seg):
    out = np.empty(n, dtype=np.int32)
    for s in range(1, n + 1, seg):
        e = min(n, s + seg - 1)
        fill(s, e, out[s - 1 : e])
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--sizes", nargs="+", type=float, default=[1e6, 1e7])
    ap.add_argument("--segment", type=int, default=1 << 16)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    ck = _backend.compiled_kernels
    if ck is None:
        print("compiled extension not built; only the fallback can be timed")
    impls = {"numpy": (py_r2, py_tau, py_dot)}
    if ck is not None:
        impls["cython"] = (ck.r2_fill, ck.tau_fill, ck.shifted_dot)

    print(f"{'kernel':<12}{'n':>12}" + "".join(f"{k + ' Mval/s':>16}" for k in impls) + f"{'speedup':>10}")
    for size in args.sizes:
        n = int(size)
        ref = None
        for name, idx in (("r2_fill", 0), ("tau_fill", 1)):
            rates = {}
            for impl, fns in impls.items():
                t = best_of(lambda: segmented(fns[idx], n, args.segment), args.repeat)
                rates[impl] = n / t / 1e6
                got = segmented(fns[idx], n, args.segment)
                if idx == 0:
                    ref = got if ref is None else ref
                    assert np.array_equal(got, ref), "backends disagree"
            sp = rates.get("cython", float("nan")) / rates["numpy"]
            print(f"{name:<12}{n:>12}" + "".join(f"{rates[k]:>16.1f}" for k in impls) + f"{sp:>10.1f}")
        rates = {}
        for impl, fns in impls.items():
            length = n - 100
            t = best_of(lambda: fns[2](ref, 0, 100, length), args.repeat)
            rates[impl] = length / t / 1e6
        sp = rates.get("cython", float("nan")) / rates["numpy"]
        print(f"{'shifted_dot':<12}{n:>12}" + "".join(f"{rates[k]:>16.1f}" for k in impls) + f"{sp:>10.1f}")


if __name__ == "__main__":
    main()
