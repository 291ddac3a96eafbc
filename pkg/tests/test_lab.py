from fractions import Fraction as F

import numpy as np
import pytest

from shiftconv import lab
from shiftconv.arith import CapacityError


def test_single_record():
    (r,) = lab.run_scan(lab.ScanConfig([10], [1]))
    assert (r.s_value, r.main, r.e_value) == (96, 80, 16)


def test_empty_m():
    assert lab.run_scan(lab.ScanConfig([10, 20], [])) == []


def test_dyadic_scan_monotone():
    recs = lab.run_scan(lab.ScanConfig(lab.dyadic(10**5, 2, 8), [1]))
    assert len(recs) == 8
    s = [r.s_value for r in recs]
    assert s == sorted(s)


def test_order_and_determinism():
    cfg = dict(x_points=lab.dyadic(1000, 2, 6), m_values=[5, 1, 3])
    a = lab.run_scan(lab.ScanConfig(**cfg, workers=1))
    b = lab.run_scan(lab.ScanConfig(**cfg, workers=8))
    assert [(r.m, r.x) for r in a] == [(m, x) for m in (5, 1, 3) for x in cfg["x_points"]]
    assert lab.records_to_csv(a) == lab.records_to_csv(b)


def test_csv_round_trip(tmp_path):
    recs = lab.run_scan(lab.ScanConfig([10, 100, 1000], [1, 6]))
    text = lab.records_to_csv(recs)
    assert text.splitlines()[0] == "x,m,s,main_num,main_den,e_num,e_den"
    back = lab.records_from_csv(text)
    assert back == recs
    for r in back:
        assert r.main + r.e_value == r.s_value
    p = tmp_path / "o.csv"
    lab.write_csv(recs, p)
    assert p.read_text() == text


def test_tau_mode():
    (r,) = lab.run_scan(lab.ScanConfig([5], [1], mode="TAU_CONV"))
    assert r.s_value == 26 and r.main == 0 and r.e_value == 26


def test_config_parse():
    cfg = lab.ScanConfig.parse("# scan\nx0 = 1000\nratio=2\ncount=3\nm_values = 1, 2\nworkers=2\nmode=R_CONV\n")
    assert cfg.x_points == [1000, 2000, 4000] and cfg.m_values == [1, 2] and cfg.workers == 2
    cfg = lab.ScanConfig.parse("x_points=1 5 9\nm_values=4\noutput_path=/tmp/x.csv")
    assert cfg.x_points == [1, 5, 9] and cfg.output_path == "/tmp/x.csv"
    for bad in ("x_points=3,2\nm_values=1", "bogus=1", "m_values=1", "x_points 1"):
        with pytest.raises(ValueError):
            lab.ScanConfig.parse(bad)
    with pytest.raises(CapacityError):
        lab.ScanConfig([2**50], [1])


def _synthetic(m, xs, f):
    return [lab.ErrorRecord(x, m, 0, F(-f(x)), F(f(x))) for x in xs]


def test_fit_exact_power_law():
    # x = 8^k gives |E| = x^(2/3) = 4^k exactly; alternate signs and two zero points
    xs = [8**k for k in range(2, 14)]
    recs = [lab.ErrorRecord(x, 3, 0, F((-1) ** k * 4**k), F((-1) ** (k + 1) * 4**k)) for k, x in enumerate(xs, 2)]
    recs += [lab.ErrorRecord(x, 3, 0, F(0), F(0)) for x in (7, 11)]
    fit = lab.fit_slope(recs)
    assert abs(fit.slope - 2 / 3) < 1e-12
    assert fit.excluded_zero == 2 and fit.points_used == len(xs)
    assert fit.r_squared == pytest.approx(1.0)


def test_fit_constant():
    fit = lab.fit_slope(_synthetic(1, [2**k for k in range(10, 30, 2)], lambda x: 5))
    assert abs(fit.slope) < 1e-12 and fit.r_squared == 1.0


def test_fit_window():
    recs = _synthetic(1, [8**k for k in range(2, 12)], lambda x: 4 ** round(np.log(x) / np.log(8)))
    fit = lab.fit_slope(recs, window=(8**4, 8**8))
    assert fit.points_used == 5 and abs(fit.slope - 2 / 3) < 1e-12


def test_fit_errors():
    with pytest.raises(lab.FitError):
        lab.fit_slope(_synthetic(1, [10, 20], lambda x: 3))
    with pytest.raises(ValueError):
        lab.fit_slope(_synthetic(1, [10], lambda x: 3) + _synthetic(2, [10], lambda x: 3))


def test_compare_with_theory():
    fits = [lab.FitResult(1, 0.9, 0.0, 5, 1.0), lab.FitResult(2, 0.5, 0.0, 5, 1.0)]
    rows = lab.compare_with_theory(fits, "7/64", 2**27)
    assert rows[0].predicted == pytest.approx(2 / 3) and rows[0].flagged
    assert not rows[1].flagged
    assert lab.predicted_beta(1.0, 0) == pytest.approx(2 / 3)
    assert "flag" in lab.format_theory(rows)


def test_ratio_convergence():
    rr = lab.ratio_convergence(lab.run_scan(lab.ScanConfig([10, 10**4, 10**7], [1])))
    assert rr.points[0] == (10, 1.2)
    assert rr.last_deviation < rr.first_deviation and rr.improving
    with pytest.raises(ValueError):
        lab.ratio_convergence(lab.run_scan(lab.ScanConfig([10], [1])))
    with pytest.raises(ZeroDivisionError):
        lab.ratio_convergence(lab.run_scan(lab.ScanConfig([5, 6], [1], mode="TAU_CONV")))


def test_dyadic_validation():
    assert lab.dyadic(3, 2, 3) == [3, 6, 12]
    with pytest.raises(ValueError):
        lab.dyadic(0, 2, 3)
    assert np.all(np.diff(lab.dyadic(2**17, 2, 11)) > 0)
