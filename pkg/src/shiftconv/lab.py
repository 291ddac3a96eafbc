"""Scans of E(x, m) over (x, m) grids, slope fits and comparison with the exponent bounds."""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .arith import TABLE_CEILING, CapacityError, r2_table, tau_table
from .convolution import shifted_sums_at
from .main_term import ErrorRecord, error_term

CSV_HEADER = ["x", "m", "s", "main_num", "main_den", "e_num", "e_den"]

# default desk-scale grid
DEFAULT_M = (1, 2, 3, 4, 5, 8, 12, 16, 100)


class Mode(enum.Enum):
    R_CONV = "R_CONV"
    TAU_CONV = "TAU_CONV"


def dyadic(x0: int, ratio: int, count: int) -> list[int]:
    if x0 < 1 or ratio < 2 or count < 1:
        raise ValueError("dyadic grid needs x0 >= 1, ratio >= 2, count >= 1")
    return [x0 * ratio**k for k in range(count)]


@dataclass
class ScanConfig:
    x_points: list
    m_values: list
    mode: Mode = Mode.R_CONV
    output_path: str | None = None
    workers: int = 1

    def __post_init__(self):
        self.x_points = [int(x) for x in self.x_points]
        self.m_values = [int(m) for m in self.m_values]
        self.mode = Mode(self.mode)
        if any(b <= a for a, b in zip(self.x_points, self.x_points[1:])):
            raise ValueError("x_points must be strictly increasing")
        if any(x < 1 for x in self.x_points):
            raise ValueError("x_points must be positive")
        if any(m < 1 for m in self.m_values):
            raise ValueError("m_values must be positive")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.x_points and self.m_values and self.x_points[-1] + max(self.m_values) > TABLE_CEILING:
            raise CapacityError("max(x) + max(m) exceeds the table ceiling")

    @classmethod
    def parse(cls, text: str) -> "ScanConfig":
        """Flat key=value lines; x_points may be given as x0/ratio/count instead."""
        kv = {}
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"malformed config line: {raw!r}")
            k, v = (s.strip() for s in line.split("=", 1))
            kv[k] = v
        known = {"x_points", "x0", "ratio", "count", "m_values", "mode", "output_path", "workers"}
        extra = set(kv) - known
        if extra:
            raise ValueError(f"unknown config keys: {sorted(extra)}")
        if "x_points" in kv:
            xs = _int_list(kv["x_points"])
        elif {"x0", "count"} <= set(kv):
            xs = dyadic(int(kv["x0"]), int(kv.get("ratio", 2)), int(kv["count"]))
        else:
            raise ValueError("config needs x_points or x0 and count")
        return cls(
            xs,
            _int_list(kv.get("m_values", "")),
            Mode(kv.get("mode", "R_CONV")),
            kv.get("output_path") or None,
            int(kv.get("workers", 1)),
        )


def _int_list(s):
    return [int(v) for v in s.replace(",", " ").split()]


def run_scan(config: ScanConfig) -> list[ErrorRecord]:
    """One record per (x, m), ordered m-major then x."""
    if not config.x_points or not config.m_values:
        return []
    hi = config.x_points[-1] + max(config.m_values)
    build = r2_table if config.mode is Mode.R_CONV else tau_table
    try:
        table = build(1, hi, workers=config.workers)
    except CapacityError as exc:
        raise CapacityError(f"x={config.x_points[-1]}, m={max(config.m_values)}: {exc}") from exc
    out = []
    for m in config.m_values:
        sums = shifted_sums_at(config.x_points, m, table, workers=config.workers)
        for x, s in zip(config.x_points, sums):
            if config.mode is Mode.R_CONV:
                out.append(error_term(x, m, s))
            else:
                # no closed main term is carried for the divisor problem
                out.append(ErrorRecord(x, m, s, Fraction(0), Fraction(s)))
    return out


def records_to_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        main, e = Fraction(r.main), Fraction(r.e_value)
        w.writerow([r.x, r.m, r.s_value, main.numerator, main.denominator, e.numerator, e.denominator])
    return buf.getvalue()


def records_from_csv(text: str) -> list[ErrorRecord]:
    rows = list(csv.reader(io.StringIO(text)))
    if rows[0] != CSV_HEADER:
        raise ValueError("unexpected CSV header")
    out = []
    for row in rows[1:]:
        x, m, s, mn, md, en, ed = map(int, row)
        out.append(ErrorRecord(x, m, s, Fraction(mn, md), Fraction(en, ed)))
    return out


def write_csv(records, path):
    with open(path, "w", newline="") as fh:
        fh.write(records_to_csv(records))


# ---------------------------------------------------------------------------
# analysis


class FitError(ValueError):
    pass


@dataclass(frozen=True)
class FitResult:
    m: int
    slope: float
    intercept: float
    points_used: int
    r_squared: float
    excluded_zero: int = 0


def fit_slope(records, window=None) -> FitResult:
    """Least squares of log|E| on log x for one m; zero-E points are dropped."""
    records = list(records)
    ms = {r.m for r in records}
    if len(ms) > 1:
        raise ValueError("fit_slope expects records for a single m")
    if window is not None:
        lo, hi = window
        records = [r for r in records if lo <= r.x <= hi]
    zero = sum(1 for r in records if r.e_value == 0)
    use = [r for r in records if r.e_value != 0]
    if len(use) < 3:
        raise FitError(f"need >= 3 nonzero error values, have {len(use)}")
    lx = np.log(np.array([float(r.x) for r in use]))
    le = np.log(np.array([abs(float(r.e_value)) for r in use]))
    a = np.vstack([lx, np.ones_like(lx)]).T
    (slope, icpt), *_ = np.linalg.lstsq(a, le, rcond=None)
    resid = le - (slope * lx + icpt)
    ss_tot = float(((le - le.mean()) ** 2).sum())
    r2v = 1.0 - float((resid**2).sum()) / ss_tot if ss_tot > 0 else 1.0
    return FitResult(use[0].m, float(slope), float(icpt), len(use), r2v, zero)


@dataclass(frozen=True)
class TheoryRow:
    m: int
    empirical: float
    mu: float
    predicted: float
    predicted_theta0: float
    flagged: bool


def predicted_beta(mu: float, theta) -> float:
    from .exponents import combined_bound

    f = combined_bound(theta)
    if mu >= f.hi:
        return float("inf")
    return float(f(mu))


def compare_with_theory(fits, theta, x_max: int, margin: float = 0.1) -> list[TheoryRow]:
    rows = []
    for fr in fits:
        mu = math.log(fr.m) / math.log(x_max)
        p = predicted_beta(mu, theta)
        p0 = predicted_beta(mu, 0)
        rows.append(TheoryRow(fr.m, fr.slope, mu, p, p0, fr.slope > p + margin))
    return rows


def format_theory(rows) -> str:
    lines = ["m      slope    mu       beta(theta)  beta(0)  flag"]
    for r in rows:
        lines.append(
            f"{r.m:<6d} {r.empirical:7.4f}  {r.mu:7.4f}  {r.predicted:11.4f}  {r.predicted_theta0:7.4f}  {'!' if r.flagged else ''}"
        )
    return "\n".join(lines)


@dataclass(frozen=True)
class RatioReport:
    m: int
    points: list = field(default_factory=list)  # (x, S/main)
    first_deviation: float = 0.0
    last_deviation: float = 0.0

    @property
    def improving(self) -> bool:
        return self.last_deviation < self.first_deviation


def ratio_convergence(records) -> RatioReport:
    records = list(records)
    if len(records) < 2:
        raise ValueError("need at least two records")
    pts = []
    for r in records:
        if r.main == 0:
            raise ZeroDivisionError(f"main term vanishes at x={r.x}, m={r.m}")
        pts.append((r.x, float(Fraction(r.s_value) / r.main)))
    return RatioReport(records[0].m, pts, abs(pts[0][1] - 1), abs(pts[-1][1] - 1))


def by_m(records) -> dict:
    out: dict[int, list] = {}
    for r in records:
        out.setdefault(r.m, []).append(r)
    return out
