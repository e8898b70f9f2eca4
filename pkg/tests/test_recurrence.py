import math

import numpy as np
import pytest

from quenchrqa.recurrence import (
    EmbeddingConfig,
    TimeSeries,
    diagonal_histogram,
    distance_matrix,
    embed,
    export_rp,
    histogram_csv,
    rp_csv,
    rqa,
    threshold_by_rate,
    vertical_histogram,
)
from quenchrqa.recurrence import _nearest_rank


def series(values, dt=1.0):
    return TimeSeries(values=np.asarray(values, dtype=float), dt=dt)


# ---------------------------------------------------------------- embedding

def test_embed_dim1_is_identity():
    s = series([1.0, 2.0, 3.0])
    assert embed(s, EmbeddingConfig(dim=1)) is s


def test_embed_dim2_delay1():
    s = series([1, 2, 3, 4])
    emb = embed(s, EmbeddingConfig(dim=2, delay=1))
    assert np.array_equal(emb.values, [[1, 2], [2, 3], [3, 4]])
    assert emb.dt == s.dt and emb.t0 == s.t0


def test_embed_dim2_delay2():
    s = series([1, 2, 3, 4, 5])
    emb = embed(s, EmbeddingConfig(dim=2, delay=2))
    assert np.array_equal(emb.values, [[1, 3], [2, 4], [3, 5]])


def test_embed_too_short_series():
    with pytest.raises(ValueError, match="too short"):
        embed(series([1, 2, 3]), EmbeddingConfig(dim=3, delay=2))


def test_embedding_config_validation():
    with pytest.raises(ValueError):
        EmbeddingConfig(dim=0)
    with pytest.raises(ValueError):
        EmbeddingConfig(delay=0)
    with pytest.raises(ValueError):
        EmbeddingConfig(metric="manhattan")


# ---------------------------------------------------------- distance matrix

def test_distance_constant_series_is_zero():
    d = distance_matrix(series([2.5] * 4))
    assert np.array_equal(d, np.zeros((4, 4)))


def test_distance_scalar_pair():
    d = distance_matrix(series([0.0, 3.0]))
    assert d[0, 1] == 3.0 and d[1, 0] == 3.0 and d[0, 0] == 0.0


def test_distance_metrics_on_vectors():
    traj = TimeSeries(values=np.array([[0.0, 0.0], [3.0, 4.0]]), dt=1.0)
    assert distance_matrix(traj, "euclidean")[0, 1] == 5.0
    assert distance_matrix(traj, "maximum")[0, 1] == 4.0


def test_distance_matrix_exactly_symmetric():
    rng = np.random.default_rng(0)
    traj = TimeSeries(values=rng.standard_normal((40, 3)), dt=1.0)
    for metric in ("euclidean", "maximum"):
        d = distance_matrix(traj, metric)
        assert np.array_equal(d, d.T)
        assert np.array_equal(np.diag(d), np.zeros(40))


# ------------------------------------------------------------- thresholding

def test_nearest_rank_small_multiset():
    # four distances {1,2,3,4}: the 0.5 quantile is the 2nd smallest
    assert _nearest_rank(np.array([1.0, 2.0, 3.0, 4.0]), 0.5) == 2.0
    assert _nearest_rank(np.array([1.0, 2.0, 3.0, 4.0]), 0.51) == 3.0


def test_threshold_constant_series_all_recurrent():
    d = distance_matrix(series([1.0] * 5))
    eps, plot = threshold_by_rate(d, 0.3)
    assert eps == 0.0
    assert plot.matrix.all()
    assert plot.rr_achieved == 1.0


def test_threshold_diagonal_always_recurrent():
    rng = np.random.default_rng(1)
    d = distance_matrix(series(rng.standard_normal(30)))
    _, plot = threshold_by_rate(d, 0.1)
    assert plot.matrix.diagonal().all()
    assert np.array_equal(plot.matrix, plot.matrix.T)


def test_threshold_white_noise_rate_control():
    rng = np.random.default_rng(2024)
    d = distance_matrix(series(rng.random(2000)))
    _, plot = threshold_by_rate(d, 0.10)
    assert 0.10 <= plot.rr_achieved <= 0.101


def test_rate_excess_bounded_by_tie_mass():
    rng = np.random.default_rng(5)
    t = 60
    d = distance_matrix(series(rng.standard_normal(t)))
    _, plot = threshold_by_rate(d, 0.25)
    ties = int((d[np.triu_indices(t, 1)] == plot.threshold).sum())
    assert plot.rr_achieved >= 0.25
    assert plot.rr_achieved - 0.25 <= 2 * ties / (t * (t - 1)) + 1.0 / (t * (t - 1) / 2)


def test_rate_monotone_in_target():
    rng = np.random.default_rng(6)
    d = distance_matrix(series(rng.standard_normal(100)))
    rates = [threshold_by_rate(d, rr)[1].rr_achieved for rr in (0.05, 0.1, 0.2, 0.4, 0.8)]
    assert all(a <= b for a, b in zip(rates, rates[1:]))


def test_threshold_rejects_bad_inputs():
    d = np.zeros((3, 3))
    with pytest.raises(ValueError):
        threshold_by_rate(d, 0.0)
    with pytest.raises(ValueError):
        threshold_by_rate(d, 1.0)
    with pytest.raises(ValueError):
        threshold_by_rate(np.zeros((1, 1)), 0.5)


def test_shift_invariance_on_exact_grid():
    # Samples on a dyadic grid shifted by a representable constant keep the
    # floating-point differences, hence D and R, bit-identical.
    rng = np.random.default_rng(7)
    x = rng.integers(0, 64, size=200) * 0.25
    d0 = distance_matrix(series(x))
    d1 = distance_matrix(series(x + 8.0))
    assert np.array_equal(d0, d1)


def test_scale_equivariance_power_of_two():
    rng = np.random.default_rng(8)
    x = rng.standard_normal(150)
    eps0, plot0 = threshold_by_rate(distance_matrix(series(x)), 0.15)
    eps1, plot1 = threshold_by_rate(distance_matrix(series(2.0 * x)), 0.15)
    assert eps1 == 2.0 * eps0
    assert np.array_equal(plot0.matrix, plot1.matrix)


# --------------------------------------------------------------- histograms

def test_diagonal_histogram_all_ones_t5():
    r = np.ones((5, 5), dtype=bool)
    assert diagonal_histogram(r) == {4: 2, 3: 2, 2: 2, 1: 2}


def test_vertical_histogram_all_ones_t5():
    r = np.ones((5, 5), dtype=bool)
    assert vertical_histogram(r) == {5: 5}


def test_diagonal_histogram_checkerboard_hand_enumeration():
    # R_ij = 1 iff i-j even, T=6: even offsets 2 and 4 are solid runs of
    # length 4 and 2; odd offsets are empty.
    i, j = np.indices((6, 6))
    r = (i - j) % 2 == 0
    assert diagonal_histogram(r) == {4: 2, 2: 2}


def test_diagonal_histogram_theiler_zero_counts_loi_once():
    r = np.ones((4, 4), dtype=bool)
    hist = diagonal_histogram(r, theiler=0)
    assert hist == {4: 1, 3: 2, 2: 2, 1: 2}


def test_run_borders_count_truncated():
    r = np.zeros((4, 4), dtype=bool)
    np.fill_diagonal(r, True)
    r[0, 1] = r[1, 0] = True
    # offset 1 diagonal is (1,0,0): one border-truncated run of length 1
    assert diagonal_histogram(r) == {1: 2}


# ---------------------------------------------------------------------- rqa

def test_rqa_constant_signal_t5_closed_form():
    d = distance_matrix(series([3.0] * 5))
    _, plot = threshold_by_rate(d, 0.1)
    report = rqa(plot)
    assert report.det == pytest.approx(0.9, abs=1e-12)
    assert report.lam == pytest.approx(1.0, abs=1e-12)
    assert report.div == pytest.approx(0.25, abs=1e-12)
    assert report.entr == pytest.approx(math.log(3), abs=1e-12)
    assert report.l_max == 4
    assert report.rr_achieved == 1.0


@pytest.mark.parametrize("t", [4, 7, 12])
def test_rqa_constant_signal_general_t(t):
    _, plot = threshold_by_rate(distance_matrix(series([1.0] * t)), 0.2)
    report = rqa(plot)
    assert report.det == pytest.approx(1 - 2 / (t * (t - 1)), abs=1e-12)
    assert report.div == pytest.approx(1 / (t - 1), abs=1e-12)
    assert report.entr == pytest.approx(math.log(t - 2), abs=1e-12)


def test_rqa_white_noise_regression_bounds():
    rng = np.random.default_rng(99)
    d = distance_matrix(series(rng.random(2000)))
    _, plot = threshold_by_rate(d, 0.10)
    report = rqa(plot)
    assert report.det < 0.25
    assert report.lam < 0.3


def test_rqa_pure_sine_strongly_deterministic():
    # ten full cycles over 2000 samples: well-resolved periodic signal
    t = np.arange(2000) * 0.1
    d = distance_matrix(series(np.sin(2 * np.pi * 0.05 * t)))
    _, plot = threshold_by_rate(d, 0.10)
    assert rqa(plot).det > 0.95


def test_rqa_degenerate_sizes_are_finite():
    for t in (2, 3):
        _, plot = threshold_by_rate(distance_matrix(series(np.arange(t, dtype=float))), 0.5)
        report = rqa(plot)
        for value in (report.det, report.lam, report.div, report.entr):
            assert np.isfinite(value)


def test_rqa_no_off_diagonal_recurrence_sentinels():
    r = np.eye(3, dtype=bool)
    report = rqa(r)
    assert report.det == 0.0
    assert report.entr == 0.0
    assert report.l_max == 1 and report.div == 1.0
    assert report.rr_achieved == 0.0


def test_rqa_scale_and_shift_leave_report_identical():
    rng = np.random.default_rng(10)
    x = rng.integers(0, 256, size=120) * 0.125
    reports = []
    for samples in (x, x + 16.0, 2.0 * x):
        _, plot = threshold_by_rate(distance_matrix(series(samples)), 0.12)
        reports.append(rqa(plot))
    assert reports[0] == reports[1]
    base, scaled = reports[0], reports[2]
    assert (base.det, base.lam, base.div, base.entr) == (
        scaled.det, scaled.lam, scaled.div, scaled.entr)


# ------------------------------------------------------------------- export

def test_export_all_ones_2x2():
    payload = export_rp(np.ones((2, 2), dtype=bool))
    assert payload == b"P5\n2 2\n255\n" + bytes([0, 0, 0, 0])


def test_export_identity_lower_left_origin():
    payload = export_rp(np.eye(3, dtype=bool))
    header, pixels = payload[:-9], payload[-9:]
    assert header == b"P5\n3 3\n255\n"
    rows = [pixels[i * 3:(i + 1) * 3] for i in range(3)]
    # file rows run top to bottom; the identity should end black at the
    # bottom-left and start black at the top-right
    assert rows[2][0] == 0 and rows[0][2] == 0
    assert rows[0][0] == 255 and rows[2][2] == 255


def test_export_deterministic():
    rng = np.random.default_rng(3)
    r = rng.random((50, 50)) < 0.2
    r = r | r.T
    np.fill_diagonal(r, True)
    assert export_rp(r) == export_rp(r.copy())


def test_rp_csv_roundtrip():
    r = np.array([[True, False], [False, True]])
    assert rp_csv(r) == "1,0\n0,1\n"


def test_histogram_csv_sorted():
    assert histogram_csv({3: 1, 1: 4}) == "length,count\n1,4\n3,1\n"
