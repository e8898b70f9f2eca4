"""Frequency-domain and magnitude baselines for correlator time series.

The spectral localization probe is the inverse participation ratio of the
normalized discrete Fourier spectrum: 1/N for a flat spectrum, 1 for a
single-bin tone.  No windowing or detrending is applied; the transform acts
on the raw selected window.
"""

from dataclasses import dataclass

import numpy as np

__all__ = ["SpectrumReport", "ipr", "mean_abs"]


@dataclass(frozen=True)
class SpectrumReport:
    """DFT amplitudes with the normalized spectral weights and their IPR."""

    frequencies: np.ndarray
    amplitudes: np.ndarray
    probabilities: np.ndarray
    ipr: float


def ipr(series):
    """Inverse participation ratio of the normalized Fourier spectrum.

    The spectral weights p_k are the squared amplitudes normalized to unit
    sum (the frequency-bin width cancels); the zero-frequency bin is kept.
    """
    x = np.asarray(series.values, dtype=float)
    if x.ndim != 1:
        raise ValueError("spectral analysis expects a scalar series")
    n = x.shape[0]
    if n < 2:
        raise ValueError(f"need at least 2 samples, got {n}")

    amplitudes = np.abs(np.fft.fft(x))
    power = amplitudes ** 2
    total = power.sum()
    if total == 0:
        raise ValueError("series is identically zero; spectrum undefined")
    probabilities = power / total
    frequencies = np.arange(n) * (2 * np.pi / (n * series.dt))
    return SpectrumReport(frequencies=frequencies, amplitudes=amplitudes,
                          probabilities=probabilities,
                          ipr=float((probabilities ** 2).sum()))


def mean_abs(series):
    """Arithmetic mean of |values| over the series."""
    x = np.asarray(series.values, dtype=float)
    if x.size == 0:
        raise ValueError("empty series")
    return float(np.abs(x).mean())
