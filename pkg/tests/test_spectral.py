import numpy as np
import pytest

from quenchrqa.recurrence import TimeSeries
from quenchrqa.spectral import ipr, mean_abs


def series(values, dt=0.1):
    return TimeSeries(values=np.asarray(values, dtype=float), dt=dt)


def test_impulse_is_spectrally_flat():
    for n in (10, 64, 257):
        x = np.zeros(n)
        x[0] = 1.0
        assert ipr(series(x)).ipr == pytest.approx(1.0 / n, abs=1e-14)


def test_shifted_impulse_is_spectrally_flat():
    n = 100
    x = np.zeros(n)
    x[37] = 2.5
    assert ipr(series(x)).ipr == pytest.approx(1.0 / n, abs=1e-13)


def test_single_bin_tones_are_fully_localized():
    # real tones occupying exactly one bin: the DC and Nyquist lines
    n = 128
    assert ipr(series(np.ones(n))).ipr == pytest.approx(1.0, abs=1e-12)
    nyquist = np.cos(np.pi * np.arange(n))
    assert ipr(series(nyquist)).ipr == pytest.approx(1.0, abs=1e-10)


def test_two_equal_tones_give_half():
    # an exact-bin cosine is a pair of equal-weight lines at +-omega
    n = 200
    x = np.cos(2 * np.pi * 5 * np.arange(n) / n)
    assert ipr(series(x)).ipr == pytest.approx(0.5, abs=1e-10)


def test_probabilities_normalized():
    rng = np.random.default_rng(1)
    report = ipr(series(rng.standard_normal(333)))
    assert report.probabilities.sum() == pytest.approx(1.0, abs=1e-10)
    assert 0 < report.ipr <= 1


def test_parseval():
    rng = np.random.default_rng(2)
    x = rng.standard_normal(500)
    report = ipr(series(x))
    lhs = (report.amplitudes ** 2).sum() / len(x)
    rhs = (x ** 2).sum()
    assert lhs == pytest.approx(rhs, rel=1e-8)


def test_ipr_scale_invariant():
    rng = np.random.default_rng(3)
    x = rng.standard_normal(250)
    assert ipr(series(x)).ipr == pytest.approx(ipr(series(7.3 * x)).ipr, rel=1e-12)


def test_frequency_grid():
    report = ipr(series(np.ones(10), dt=0.5))
    assert report.frequencies[1] == pytest.approx(2 * np.pi / (10 * 0.5), rel=1e-15)


def test_ipr_rejects_degenerate_input():
    with pytest.raises(ValueError, match="at least 2"):
        ipr(series([1.0]))
    with pytest.raises(ValueError, match="zero"):
        ipr(series(np.zeros(16)))


def test_mean_abs_constants():
    assert mean_abs(series([3.0] * 7)) == 3.0
    assert mean_abs(series([-1.0, 1.0])) == 1.0
    assert mean_abs(series([-2.0, 0.0, 2.0])) == pytest.approx(4.0 / 3.0)
