"""Recurrence plots and recurrence quantification analysis.

A recurrence plot marks all pairs of times at which a trajectory returns to
the same phase-space neighborhood: R_ij = 1 iff D_ij <= eps, with equality
counting as recurrent.  The threshold is fixed indirectly through a target
recurrence rate: eps is the nearest-rank quantile of the strict upper
triangle of the distance matrix, which guarantees the achieved rate is at
least the target, with excess bounded by the tie mass at eps.

Line statistics follow the common conventions: diagonal-line measures use a
Theiler window of 1 (the main diagonal is excluded, both triangles counted),
vertical-line measures use the full matrix including the main diagonal.
Border-truncated runs count at their truncated length.
"""

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

__all__ = [
    "TimeSeries",
    "EmbeddingConfig",
    "RecurrencePlot",
    "RQAReport",
    "embed",
    "distance_matrix",
    "threshold_by_rate",
    "diagonal_histogram",
    "vertical_histogram",
    "rqa",
    "export_rp",
    "rp_csv",
    "histogram_csv",
]

METRICS = ("euclidean", "maximum")


@dataclass(frozen=True)
class TimeSeries:
    """Uniformly sampled series; scalar samples or phase-space vectors.

    ``values`` has shape (T,) for a scalar series or (T, d) for trajectories.
    """

    values: np.ndarray
    dt: float
    t0: float = 0.0

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim not in (1, 2) or values.shape[0] == 0:
            raise ValueError(f"values must be a nonempty 1D or 2D array, got shape {values.shape}")
        if self.dt <= 0:
            raise ValueError(f"dt must be > 0, got {self.dt}")
        object.__setattr__(self, "values", values)

    @property
    def n_samples(self):
        return self.values.shape[0]

    @property
    def dim(self):
        return 1 if self.values.ndim == 1 else self.values.shape[1]

    @property
    def times(self):
        return self.t0 + np.arange(self.n_samples) * self.dt


@dataclass(frozen=True)
class EmbeddingConfig:
    """Time-delay embedding parameters: dimension, delay (in samples), metric."""

    dim: int = 1
    delay: int = 1
    metric: str = "euclidean"

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"embedding dimension must be >= 1, got {self.dim}")
        if self.delay < 1:
            raise ValueError(f"embedding delay must be >= 1, got {self.delay}")
        if self.metric not in METRICS:
            raise ValueError(f"metric must be one of {METRICS}, got {self.metric!r}")


def embed(series, config):
    """Delay-embed a scalar series into config.dim-dimensional state vectors.

    Vector i is (x_i, x_{i+delay}, ..., x_{i+(dim-1)*delay}); dim=1 returns
    the input unchanged.
    """
    if config.dim == 1:
        return series
    if series.dim != 1:
        raise ValueError("delay embedding expects a scalar series")
    length = series.n_samples - (config.dim - 1) * config.delay
    if length < 2:
        raise ValueError(
            f"series of {series.n_samples} samples too short for "
            f"(dim={config.dim}, delay={config.delay}) embedding")
    idx = np.arange(length)[:, None] + np.arange(config.dim)[None, :] * config.delay
    return TimeSeries(values=series.values[idx], dt=series.dt, t0=series.t0)


def distance_matrix(trajectory, metric="euclidean"):
    """Pairwise distances between trajectory points; symmetric, zero diagonal."""
    if metric not in METRICS:
        raise ValueError(f"metric must be one of {METRICS}, got {metric!r}")
    x = trajectory.values if isinstance(trajectory, TimeSeries) else np.asarray(trajectory, float)
    if x.ndim == 1:
        x = x[:, None]
    if x.shape[0] == 0:
        raise ValueError("empty trajectory")
    diff = np.abs(x[:, None, :] - x[None, :, :])
    if x.shape[1] == 1:
        return diff[:, :, 0]
    if metric == "maximum":
        return diff.max(axis=2)
    return np.sqrt((diff * diff).sum(axis=2))


@dataclass(frozen=True)
class RecurrencePlot:
    """Thresholded recurrence matrix with the rate bookkeeping."""

    matrix: np.ndarray  # boolean, T x T
    threshold: float
    rr_target: float
    rr_achieved: float


def _nearest_rank(sorted_values, fraction):
    """Smallest value such that at least ceil(fraction * N) values are <= it."""
    n = len(sorted_values)
    rank = math.ceil(fraction * n - 1e-9)
    rank = min(max(rank, 1), n)
    return float(sorted_values[rank - 1])


def threshold_by_rate(distances, rr_target):
    """Pick the threshold as the rr_target nearest-rank quantile of distances.

    The quantile is taken over the T(T-1)/2 strict-upper-triangle entries;
    the achieved rate is measured over all off-diagonal entries.
    """
    if not 0 < rr_target < 1:
        raise ValueError(f"rr_target must be in (0, 1), got {rr_target}")
    distances = np.asarray(distances, dtype=float)
    n = distances.shape[0]
    if distances.ndim != 2 or distances.shape[1] != n:
        raise ValueError(f"distance matrix must be square, got {distances.shape}")
    if n < 2:
        raise ValueError("need at least two samples to threshold")

    upper = np.sort(distances[np.triu_indices(n, k=1)])
    eps = _nearest_rank(upper, rr_target)
    matrix = distances <= eps
    rr_achieved = (int(matrix.sum()) - n) / (n * (n - 1))
    return eps, RecurrencePlot(matrix=matrix, threshold=eps,
                               rr_target=float(rr_target), rr_achieved=rr_achieved)


def _run_lengths(line):
    """Lengths of maximal runs of True in a 1D boolean array."""
    padded = np.concatenate(([False], line, [False]))
    edges = np.diff(padded.astype(np.int8))
    return np.flatnonzero(edges == -1) - np.flatnonzero(edges == 1)


def _matrix_of(plot_or_matrix):
    if isinstance(plot_or_matrix, RecurrencePlot):
        return plot_or_matrix.matrix
    matrix = np.asarray(plot_or_matrix).astype(bool)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"recurrence matrix must be square, got {matrix.shape}")
    return matrix


def diagonal_histogram(plot, theiler=1):
    """Counts of maximal diagonal runs on diagonals with |i-j| >= theiler.

    Assumes a symmetric matrix: each off-main diagonal is counted for both
    triangles.  theiler=1 excludes exactly the main diagonal.
    """
    matrix = _matrix_of(plot)
    n = matrix.shape[0]
    if theiler < 0:
        raise ValueError(f"theiler must be >= 0, got {theiler}")
    hist = Counter()
    for offset in range(theiler, n):
        weight = 1 if offset == 0 else 2
        for length in _run_lengths(np.diagonal(matrix, offset)):
            hist[int(length)] += weight
    return dict(hist)


def vertical_histogram(plot):
    """Counts of maximal vertical runs over all columns of the full matrix."""
    matrix = _matrix_of(plot)
    hist = Counter()
    for column in matrix.T:
        for length in _run_lengths(column):
            hist[int(length)] += 1
    return dict(hist)


@dataclass(frozen=True)
class RQAReport:
    """The four recurrence quantifiers with their line-length histograms."""

    det: float
    lam: float
    div: float
    entr: float
    rr_achieved: float
    l_max: int
    diag_hist: dict
    vert_hist: dict
    l_min: int = 2
    v_min: int = 2


def _weighted_fraction(hist, minimum):
    total = sum(length * count for length, count in hist.items())
    if total == 0:
        return 0.0
    kept = sum(length * count for length, count in hist.items() if length >= minimum)
    return kept / total


def _length_entropy(hist, minimum):
    counts = np.array([c for length, c in hist.items() if length >= minimum], dtype=float)
    if counts.size == 0 or counts.sum() == 0:
        return 0.0
    p = counts / counts.sum()
    return float(-(p * np.log(p)).sum())


def rqa(plot, l_min=2, v_min=2, theiler=1):
    """Determinism, laminarity, divergence, and diagonal-length entropy.

    DET is the fraction of off-main-diagonal recurrence points lying on
    diagonal runs of length >= l_min; LAM the analogue for vertical runs over
    the full matrix; DIV = 1/L_max with L_max the longest off-main diagonal
    run (sentinel 1 when there is no off-diagonal recurrence at all); ENTR
    the Shannon entropy of run lengths >= l_min.
    """
    matrix = _matrix_of(plot)
    n = matrix.shape[0]
    diag_hist = diagonal_histogram(matrix, theiler=theiler)
    vert_hist = vertical_histogram(matrix)

    l_max = max(diag_hist) if diag_hist else 1
    rr_achieved = (int(matrix.sum()) - int(matrix.diagonal().sum())) / (n * (n - 1)) if n > 1 else 0.0
    return RQAReport(
        det=_weighted_fraction(diag_hist, l_min),
        lam=_weighted_fraction(vert_hist, v_min),
        div=1.0 / l_max,
        entr=_length_entropy(diag_hist, l_min),
        rr_achieved=rr_achieved,
        l_max=l_max,
        diag_hist=diag_hist,
        vert_hist=vert_hist,
        l_min=l_min,
        v_min=v_min,
    )


def export_rp(plot):
    """Render the recurrence matrix as a binary 8-bit graymap (PGM, magic P5).

    Recurrent entries are black (0), non-recurrent white (255).  The origin
    is at the lower-left corner, so time increases upwards and to the right.
    """
    matrix = _matrix_of(plot)
    image = np.where(matrix, 0, 255).astype(np.uint8)[::-1, :]
    height, width = image.shape
    header = f"P5\n{width} {height}\n255\n".encode("ascii")
    return header + image.tobytes()


def rp_csv(plot):
    """Recurrence matrix as CSV text, one row per line, entries 0/1."""
    matrix = _matrix_of(plot)
    lines = [",".join("1" if v else "0" for v in row) for row in matrix]
    return "\n".join(lines) + "\n"


def histogram_csv(hist):
    """Two-column CSV (length,count), lengths ascending."""
    lines = ["length,count"]
    for length in sorted(hist):
        lines.append(f"{length},{hist[length]}")
    return "\n".join(lines) + "\n"
