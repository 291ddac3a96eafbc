"""Identity suite behind `shiftconv verify`. Each check returns (name, ok, detail)."""

from __future__ import annotations

import time
from fractions import Fraction as F

import numpy as np

# the tabulated envelope at theta = 7/64: (left end, slope, intercept)
TABLE_7_64 = (
    (F(0), F(0), F(2, 3)),
    (F(64, 117), F(39, 128), F(1, 2)),
    (F(64, 89), F(7, 96), F(2, 3)),
    (F(160, 161), F(0), F(17, 23)),
    (F(1), F(17, 46), F(17, 46)),
    (F(1232, 1137), F(215, 448), F(1, 4)),
    (F(112, 99), F(13, 32), F(1, 3)),
)
TABLE_7_64_END = F(64, 39)


def _timed(fn):
    t0 = time.perf_counter()
    ok, detail = fn()
    return ok, f"{detail} [{time.perf_counter() - t0:.2f}s]"


def check_oracle(xmax, mmax):
    from .arith import r2_table
    from .convolution import lattice_count_C_upto, shifted_sums_at

    table = r2_table(1, xmax + mmax)
    xs = list(range(1, xmax + 1))
    bad = 0
    for m in range(1, mmax + 1):
        got = np.array(shifted_sums_at(xs, m, table), dtype=np.int64)
        bad += int(np.count_nonzero(got != lattice_count_C_upto(xmax, m)[1:]))
    return bad == 0, f"x<={xmax}, m<={mmax}, mismatches={bad}"


def check_identities(xmax, mmax):
    from .convolution import identity_checks_upto

    failed = [m for m in range(2, mmax + 1, 2) if not all(identity_checks_upto(xmax, m))]
    return not failed, f"x<={xmax}, even m<={mmax}, failing m={failed}"


def check_main_forms(mmax):
    from .main_term import main_coefficients_upto

    first, compact = main_coefficients_upto(mmax)
    bad = int(np.count_nonzero(first[1:] != compact[1:]))
    return bad == 0, f"m<={mmax}, mismatches={bad}"


def check_table():
    from .exponents import combined_bound

    f = combined_bound(F(7, 64))
    got = [(l, p.slope, p.intercept) for l, _, p in f.intervals()]
    ok = got == list(TABLE_7_64) and f.hi == TABLE_7_64_END
    return ok, f"{len(got)} pieces"


def check_gains():
    from .exponents import combined_bound, theorem_main_exponents

    th = F(7, 64)
    m, c = theorem_main_exponents(th), combined_bound(th)
    g1 = m(F(1232, 1137)) - c(F(1232, 1137))
    g2 = m(F(1)) - c(F(1))
    return (g1, g2) == (F(4, 1137), F(1, 2208)), f"gains {g1}, {g2}"


def check_thresholds():
    from .exponents import uniformity_threshold, uniformity_threshold_beta

    vals = (uniformity_threshold(F(7, 64)), uniformity_threshold(0), uniformity_threshold_beta(F(17, 6)))
    return vals == (F(64, 39), F(2), F(17, 11)), "thresholds " + ", ".join(map(str, vals))


def check_dual_counts(dmax):
    from .hyperbolic import count_M_direct, count_M_quadruple, r_weighted_majorant

    bad = []
    for d in range(1, dmax + 1):
        for t in (F(1, 8), F(1, 4), F(1, 2), F(1), F(2)):
            a, b = count_M_direct(d, t), count_M_quadruple(d, t)
            if a != b or 2 * b > r_weighted_majorant(d, t):
                bad.append((d, t))
    return not bad, f"d<={dmax}, failures={bad}"


def check_hecke(mmax_reps, mmax_partition, mmax_eta):
    from .arith import sigma
    from .hecke_eigen import hecke_multiplicativity_check, hecke_square_relation_check, theta_proxy_bound_check
    from .hyperbolic import hecke_coset_reps, partition_check

    reps = all(len(hecke_coset_reps(m)) == sigma(m) for m in range(1, mmax_reps + 1))
    part = all(partition_check(m) for m in range(1, mmax_partition + 1))
    ts = (0.0, 0.7, 2.5, 13.3, 41.0)
    sq = all(hecke_square_relation_check(m, t) for m in range(1, mmax_eta + 1) for t in ts)
    mult = all(hecke_multiplicativity_check(m, n, t) for m in range(1, 40) for n in range(1, 40) for t in ts[:3])
    proxy = theta_proxy_bound_check(mmax_eta).ok
    ok = reps and part and sq and mult and proxy
    return ok, f"reps={reps} partition={part} square={sq} mult={mult} bounds={proxy}"


def run_suite(quick=True, workers=1):
    if quick:
        plan = [
            ("oracle", lambda: check_oracle(500, 20)),
            ("identities", lambda: check_identities(500, 16)),
            ("main-term forms", lambda: check_main_forms(10**4)),
        ]
    else:
        plan = [
            ("oracle", lambda: check_oracle(2000, 50)),
            ("identities", lambda: check_identities(2000, 64)),
            ("main-term forms", lambda: check_main_forms(10**6)),
        ]
    plan += [
        ("exponent table 7/64", check_table),
        ("gains", check_gains),
        ("thresholds", check_thresholds),
        ("dual counts", lambda: check_dual_counts(3 if quick else 5)),
        ("hecke", lambda: check_hecke(500 if quick else 10**4, 6 if quick else 12, 200 if quick else 2000)),
    ]
    out = []
    for name, fn in plan:
        ok, detail = _timed(fn)
        out.append((name, ok, detail))
    return out
