"""Command line entry point: shiftconv {sieve,sum,main-term,scan,exponents,lattice,verify}."""

from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _frac(s: str) -> Fraction:
    try:
        return Fraction(s.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected p/q, got {s!r}")


def _positive(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _emit(text: str, out):
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------


def cmd_sieve(args):
    from .arith import r2_table, tau_table

    build = r2_table if args.kind == "r2" else tau_table
    t0 = time.perf_counter()
    table = build(args.lo, args.hi, workers=args.workers)
    dt = time.perf_counter() - t0
    if args.out:
        table.dump(args.out)
    print(f"{args.kind} table [{args.lo}, {args.hi}]: {len(table)} values in {dt:.3f}s")
    if not args.out:
        head = table.values[: min(len(table), 20)].tolist()
        print(" ".join(map(str, head)) + (" ..." if len(table) > 20 else ""))
    return EXIT_OK


def cmd_sum(args):
    from . import convolution as cv
    from .arith import r2_table, tau_table

    x, m = args.x, args.m
    if args.kind == "S":
        val = cv.shifted_sum(x, m, r2_table(1, max(1, x + m))) if x else 0
    elif args.kind == "D":
        val = cv.divisor_shifted_sum(x, m, tau_table(1, max(1, x + m))) if x else 0
    else:
        val = cv.a_count(x, m)
    print(f"{args.kind}({x},{m}) = {val}")
    return EXIT_OK


def cmd_main_term(args):
    from .main_term import main_coefficient, main_coefficient_compact, main_coefficient_sigma2k, main_term

    m = args.m
    c = main_coefficient(m)
    cc = main_coefficient_compact(m)
    print(f"m={m}: 8|2^(k+1)-3|sigma(m/2^k) = {c}")
    print(f"      8 sum (-1)^(m+d) d      = {cc}")
    ok = c == cc
    if m % 2 == 0:
        c2 = main_coefficient_sigma2k(m)
        print(f"      8(sigma(2^k)-2)sigma     = {c2}")
        ok &= c2 == c
    if args.x is not None:
        print(f"main term at x={args.x}: {main_term(args.x, m).value}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_scan(args):
    from . import lab

    with open(args.config) as fh:
        cfg = lab.ScanConfig.parse(fh.read())
    if args.workers:
        cfg.workers = args.workers
    out = args.out or cfg.output_path
    t0 = time.perf_counter()
    records = lab.run_scan(cfg)
    dt = time.perf_counter() - t0
    _emit(lab.records_to_csv(records), out)
    print(f"{len(records)} records in {dt:.2f}s", file=sys.stderr)
    if cfg.mode is lab.Mode.R_CONV and len(cfg.x_points) >= 3:
        fits = []
        for m, rs in lab.by_m(records).items():
            try:
                fits.append(lab.fit_slope(rs))
            except lab.FitError:
                continue
        if fits:
            theta = args.theta if args.theta is not None else Fraction(7, 64)
            print(lab.format_theory(lab.compare_with_theory(fits, theta, cfg.x_points[-1])), file=sys.stderr)
    return EXIT_OK


def cmd_exponents(args):
    from .exponents import theorems as th

    theta = args.theta if args.theta is not None else Fraction(7, 64)
    blocks = []
    if args.which in ("main", "all"):
        blocks.append(("main", th.theorem_main_exponents(theta)))
    if args.which in ("maini", "all"):
        try:
            blocks.append(("maini", th.theorem_maini_exponents(theta).bound))
        except th.NotApplicable as exc:
            if args.which == "maini":
                raise UsageError(str(exc))
    if args.which in ("combined", "all"):
        blocks.append(("combined", th.combined_bound(theta)))
    if args.which in ("oldth", "all"):
        blocks.append(("oldth", th.theorem_oldth_exponents(theta)))

    if args.mu is not None:
        for name, f in blocks:
            if f.lo <= args.mu < f.hi:
                print(f"{name}: beta({args.mu}) = {f(args.mu)}")
            else:
                print(f"{name}: mu={args.mu} outside [{f.lo}, {f.hi})")
        return EXIT_OK

    if args.out:
        name, f = blocks[-1] if args.which != "all" else next(b for b in blocks if b[0] == "combined")
        if args.axis == "alpha":
            text = "alpha_num,alpha_den,beta_num,beta_den\n" + "".join(
                f"{a.numerator},{a.denominator},{b.numerator},{b.denominator}\n" for a, b in th.alpha_rows(f)
            )
        else:
            text = th.to_csv(f)
        _emit(text, args.out)
    for name, f in blocks:
        print(th.report(f, f"{name} (theta={theta})"))
    print(f"uniformity threshold 2/(1+2 theta) = {th.uniformity_threshold(theta)}")
    return EXIT_OK


def cmd_lattice(args):
    from .hyperbolic import count_M_direct, count_M_quadruple, r_weighted_majorant

    t = args.t
    a = count_M_direct(args.d, t)
    b = count_M_quadruple(args.d, t)
    maj = r_weighted_majorant(args.d, t)
    print(f"d={args.d} t={t}: direct={a} quadruple={b} majorant={maj}")
    return EXIT_OK if a == b and 2 * b <= maj else EXIT_FAIL


def cmd_verify(args):
    from .verify import run_suite

    results = run_suite(quick=not args.full, workers=args.workers)
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
    return EXIT_OK if all(ok for _, ok, _ in results) else EXIT_FAIL


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="shiftconv", description=__doc__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--theta", type=_frac, default=None, help="theta as p/q")
    common.add_argument("--mu", type=_frac, default=None, help="evaluate at m = x^mu (p/q)")
    common.add_argument("--out", default=None, help="output path")
    common.add_argument("--workers", type=_positive, default=None)
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    s = sub.add_parser("sieve", parents=[common], help="build and dump an r2/tau table")
    s.add_argument("--lo", type=_positive, default=1)
    s.add_argument("--hi", type=_positive, required=True)
    s.add_argument("--kind", choices=["r2", "tau"], default="r2")
    s.set_defaults(fn=cmd_sieve)

    s = sub.add_parser("sum", parents=[common], help="one exact S, A or D value")
    s.add_argument("x", type=int)
    s.add_argument("m", type=_positive)
    s.add_argument("--kind", choices=["S", "A", "D"], default="S")
    s.set_defaults(fn=cmd_sum)

    s = sub.add_parser("main-term", parents=[common], help="main-term coefficient in every form")
    s.add_argument("m", type=_positive)
    s.add_argument("--x", type=int, default=None)
    s.set_defaults(fn=cmd_main_term)

    s = sub.add_parser("scan", parents=[common], help="run a key=value scan config")
    s.add_argument("config")
    s.set_defaults(fn=cmd_scan)

    s = sub.add_parser("exponents", parents=[common], help="exponent tables for a theta")
    s.add_argument("--which", choices=["main", "maini", "combined", "oldth", "all"], default="all")
    s.add_argument("--axis", choices=["mu", "alpha"], default="mu")
    s.set_defaults(fn=cmd_exponents)

    s = sub.add_parser("lattice", parents=[common], help="dual counts of M(t)")
    s.add_argument("--d", type=_positive, default=1)
    s.add_argument("--t", type=_frac, default=Fraction(1))
    s.set_defaults(fn=cmd_lattice)

    s = sub.add_parser("verify", parents=[common], help="run the identity suite")
    s.add_argument("--full", action="store_true", help="acceptance-size ranges")
    s.set_defaults(fn=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # usage errors and --help
        return exc.code
    if args.workers is None and args.cmd in ("sieve", "verify"):
        args.workers = 1
    try:
        return args.fn(args)
    except (UsageError, ValueError, OSError) as exc:
        print(f"shiftconv {args.cmd}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
