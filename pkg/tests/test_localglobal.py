import json

import numpy as np
import pytest

from apollonian.enumerate import CurvatureHistogram, count_circles, histogram
from apollonian.errors import UsageError
from apollonian.localglobal import (exceptions_in_histogram, find_exceptions, fit_growth,
                                    frequency_distribution, predicted_mean, report_json,
                                    residue_members)
from apollonian.orbits import admissible_residues


def test_bugeye_exceptions_below_20000(bug):
    rep = find_exceptions(bug, 1, 20000)
    assert 13806 in rep.exceptions
    assert rep.largest == max(rep.exceptions)
    assert all(n % 24 in admissible_residues(bug) for n in rep.exceptions)
    # chunked scanning gives the same answer
    assert find_exceptions(bug, 1, 20000, chunk_size=3001).exceptions == rep.exceptions


def test_residue_filter(bug):
    rep = find_exceptions(bug, 1, 20000, residue_filter=6)
    assert rep.exceptions[-3:] == [12534, 13206, 13806]
    assert set(rep.by_residue) == {6}
    assert rep.largest == 13806
    js = json.loads(report_json(rep))
    assert 13806 in js["exceptions"]
    with pytest.raises(UsageError):
        find_exceptions(bug, 1, 100, residue_filter=24)


def test_exceptions_from_synthetic_histogram():
    h = CurvatureHistogram(24, 72, np.ones(48, dtype=np.uint32), (-1, 2, 2, 3))
    h.counts[[2, 3, 26]] = 0  # 26, 27, 50
    assert exceptions_in_histogram(h, [2, 3]) == [26, 27, 50]
    assert exceptions_in_histogram(h, [2, 3], residue_filter=3) == [27]


def test_no_curvature_in_inadmissible_class(bug, coin):
    for p in (bug, coin):
        h = histogram(p, 1, 10**5)
        res = (np.arange(1, 10**5) % 24)
        bad = ~np.isin(res, admissible_residues(p))
        assert int(h.counts[bad].sum()) == 0


def test_residue_members():
    for lo, hi in ((1, 100), (24, 48), (7, 8), (100, 1000)):
        for n in range(24):
            assert residue_members(lo, hi, n) == sum(1 for x in range(lo, hi) if x % 24 == n)


def test_frequency_distribution(bug):
    h = histogram(bug, 10**4, 5 * 10**4)
    fd = frequency_distribution(h, 2)
    assert fd.members == residue_members(10**4, 5 * 10**4, 2)
    vals = h.counts[(2 - 10**4) % 24::24]
    assert fd.total == int(vals.sum())
    assert fd.mean == pytest.approx(vals.mean())
    assert fd.variance == pytest.approx(vals.var())
    csv = fd.to_csv(12.5).splitlines()
    assert csv[0] == "m,count" and csv[-2] == "mean,variance,predicted_mean"
    assert csv[-1].endswith(",12.5")


def test_predicted_mean_asymptotic_values(bug, coin):
    kw = dict(mode="asymptotic", delta=1.30568)
    assert predicted_mean(bug, 2, 10**6, 10**8, c_P=0.402, **kw) == pytest.approx(406.70, rel=1e-3)
    assert predicted_mean(bug, 3, 10**6, 10**8, c_P=0.402, **kw) == pytest.approx(271.13, rel=1e-3)
    for n, want in ((13, 73.05), (21, 48.70), (4, 36.52), (0, 24.35)):
        got = predicted_mean(coin, n, 4 * 10**8, 5 * 10**8, c_P=0.0176, **kw)
        assert got == pytest.approx(want, rel=1e-3)
    assert predicted_mean(bug, 0, 10, 20, c_P=1, **kw) == 0.0


def test_predicted_mean_measured_tracks_observed(bug):
    lo, hi = 2 * 10**5, 10**6
    h = histogram(bug, lo, hi)
    counts = (count_circles(bug, lo), count_circles(bug, hi))
    for n in admissible_residues(bug):
        pred = predicted_mean(bug, n, lo, hi, counts=counts)
        obs = frequency_distribution(h, n).mean
        assert obs == pytest.approx(pred, rel=0.05)


def test_predicted_mean_errors(bug):
    with pytest.raises(UsageError):
        predicted_mean(bug, 2, 10, 20, mode="asymptotic")
    with pytest.raises(UsageError):
        predicted_mean(bug, 2, 10, 20, mode="nope", counts=(0, 1))
    with pytest.raises(UsageError):
        predicted_mean(bug, 25, 10, 20)


def test_fit_growth_recovers_power_law():
    xs = [10**k for k in range(3, 8)]
    d, c = fit_growth([(x, 0.4 * x**1.3) for x in xs])
    assert d == pytest.approx(1.3) and c == pytest.approx(0.4)
    with pytest.raises(UsageError):
        fit_growth([(1, 1), (2, 2)])
    with pytest.raises(UsageError):
        fit_growth([(1, 1), (1, 2), (1, 3)])
