import json
import math
import os
from pathlib import Path

import numpy as np
import pytest

import ipseries

DATA = Path(os.environ.get("IPSERIES_DATA_DIR", Path(__file__).resolve().parents[2] / "data"))
CSV = DATA / "uspto_monthly.csv"


@pytest.fixture(scope="module")
def series():
    return ipseries.read_csv(CSV)


def test_read_csv(series):
    assert series["start"] == "1977-09"
    assert len(series["trademarks"]) == 472
    assert len(series["patents"]) == 472


def test_summary_stats_matches_numpy():
    x = np.random.default_rng(1).normal(size=101)
    s = ipseries.summary_stats(x)
    assert math.isclose(s["mean"], x.mean(), rel_tol=1e-12)
    assert math.isclose(s["median"], float(np.median(x)), rel_tol=1e-12)
    assert s["min"] == x.min() and s["max"] == x.max()


def test_rank_correlation_monotone_transform():
    x = np.arange(50.0)
    assert ipseries.rank_correlation(x, np.exp(x / 10)) == pytest.approx(1.0)
    assert ipseries.rank_correlation(x, -x, "kendall") == pytest.approx(-1.0)


def test_outliers_flag_spike():
    t = np.arange(120)
    x = 100 + 10 * np.sin(2 * np.pi * t / 12) + np.random.default_rng(2).normal(0, 1, 120)
    x[60] += 40
    r = ipseries.detect_outliers("2000-01", x)
    assert any(f["date"] == "2005-01" for f in r["flags"])
    assert r["cleaned"][60] < x[60] - 20
    assert len(r["cleaned"]) == 120


def test_breakpoints_single_shift():
    y = np.r_[np.zeros(40), np.full(40, 5.0)] + np.random.default_rng(3).normal(0, 0.5, 80)
    b = ipseries.breakpoints(y, h=0.15, start="2000-01")
    assert [br["index"] for br in b["breaks"]] == [39]
    assert b["breaks"][0]["date"] == "2003-04"
    assert b["breaks"][0]["ci_low"] <= "2003-04" <= b["breaks"][0]["ci_high"]


def test_efp_rejects_shift_and_not_white_noise():
    rng = np.random.default_rng(4)
    y = np.r_[np.zeros(100), np.full(100, 2.0)] + rng.normal(size=200)
    assert ipseries.efp(y, "ols-cusum")["test"]["p_value"] < 0.01
    assert ipseries.efp(rng.normal(size=200), "OLS-CUSUM")["test"]["p_value"] > 0.01


def test_unit_root_and_ndiffs():
    rng = np.random.default_rng(5)
    walk = np.cumsum(rng.normal(size=300))
    d, capped = ipseries.ndiffs(walk, "kpss")
    assert d == 1 and not capped
    assert ipseries.ndiffs(rng.normal(size=300), "adf") == (0, False)
    r = ipseries.unit_root_test(walk, "adf")
    assert "statistic" in r


def test_cointegration_on_shared_trend():
    rng = np.random.default_rng(6)
    trend = np.cumsum(rng.normal(size=300))
    x = trend + rng.normal(0, 0.5, 300)
    y = 2 * trend + rng.normal(0, 0.5, 300)
    j = ipseries.johansen(x, y)
    assert j["trace"]["r0"] > j["critical"]["r0"]["5pct"]
    assert j["rejected_at"]["r1"] == 0.0
    assert ipseries.phillips_ouliaris(x, y)["rejected_at"] > 0


def test_cointegration_independent_walks_not_rejected():
    rng = np.random.default_rng(8)
    x, y = np.cumsum(rng.normal(size=(2, 300)), axis=1)
    assert ipseries.johansen(x, y)["rejected_at"]["r0"] == 0.0


def test_cross_wavelet_shapes():
    rng = np.random.default_rng(7)
    s = ipseries.cross_wavelet(rng.normal(size=128), rng.normal(size=128))
    assert len(s["power"]) == len(s["periods"]) == len(s["signif"])
    assert len(s["power"][0]) == 128
    assert len(s["coi"]) == 128


def test_errors_carry_code():
    with pytest.raises(ipseries.IpseriesError) as e:
        ipseries.breakpoints([1.0, 2.0, 3.0], h=1.5)
    assert e.value.code == "parameter"
    with pytest.raises(ValueError):
        ipseries.efp(np.zeros(50), "bogus")


def test_analyze_writes_outputs(tmp_path):
    rep = ipseries.analyze(CSV, tmp_path)
    assert rep["provenance"]["rows_read"] == 472
    assert all(s["status"] == "ok" for s in rep["stages"])
    on_disk = json.loads((tmp_path / "report.json").read_text())
    assert on_disk["provenance"]["data_sha256"] == rep["provenance"]["data_sha256"]
    assert (tmp_path / "table5.md").exists()
