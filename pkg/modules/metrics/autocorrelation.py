"""
Autocorrelation
===============
Full-lag biased autocorrelation r_k = c_k / c_0 with

    c_k = (1/N) * sum_{t=0}^{N-1-k} (s_t - mean)(s_{t+k} - mean),  k = 0..N-1

Short signals use a direct correlation; longer ones go through a zero-padded
real FFT (O(N log N)). Both paths agree within 1e-9.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy import fft as sp_fft

from modules.shared.config import FFT_THRESHOLD
from modules.shared.errors import ConfigError, ZeroVariance
from modules.shared.signal import Signal

logger = logging.getLogger(__name__)

METHODS = ('auto', 'fft', 'direct')


@dataclass(frozen=True)
class AutocorrSeries:
    """r_k for k = 0..N-1, r_0 = 1."""

    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)

    @property
    def n_samples(self) -> int:
        return int(self.values.size)

    def __len__(self) -> int:
        return self.n_samples

    @classmethod
    def from_values(cls, values) -> 'AutocorrSeries':
        return cls(np.asarray(values, dtype=np.float64))


def _autocovariance_direct(centered: np.ndarray) -> np.ndarray:
    n = centered.size
    full = np.correlate(centered, centered, mode='full')
    return full[n - 1:] / n


def _autocovariance_fft(centered: np.ndarray) -> np.ndarray:
    n = centered.size
    size = sp_fft.next_fast_len(2 * n - 1, real=True)
    spectrum = sp_fft.rfft(centered, n=size)
    acov = sp_fft.irfft(spectrum * np.conj(spectrum), n=size)[:n]
    return acov / n


def autocovariance(samples: np.ndarray, method: str = 'auto') -> np.ndarray:
    """
    Biased autocovariance c_k for every lag.

    Args:
        samples: 1-D array of finite values
        method: 'auto' (FFT above FFT_THRESHOLD samples), 'fft' or 'direct'

    Returns:
        Array of length N with c_0 = sigma_0^2 (population variance)
    """
    if method not in METHODS:
        raise ConfigError(f"unknown autocorrelation method '{method}', expected one of {METHODS}")

    x = np.asarray(samples, dtype=np.float64)
    centered = x - x.mean()
    if method == 'fft' or (method == 'auto' and x.size > FFT_THRESHOLD):
        return _autocovariance_fft(centered)
    return _autocovariance_direct(centered)


def autocorrelation(signal: Signal, method: str = 'auto') -> AutocorrSeries:
    """
    Normalised autocorrelation of a signal for lags 0..N-1.

    Args:
        signal: input Signal (already validated finite, N >= 2)
        method: see autocovariance

    Returns:
        AutocorrSeries with r_0 = 1 exactly

    Raises:
        ZeroVariance: if every sample is equal
    """
    x = signal.samples
    if np.ptp(x) == 0.0:
        raise ZeroVariance("autocorrelation undefined: all samples are equal")

    acov = autocovariance(x, method=method)
    c0 = acov[0]
    if not c0 > 0.0:
        raise ZeroVariance("autocorrelation undefined: sample variance is zero")

    r = acov / c0
    r[0] = 1.0
    # FFT round-off can push |r_k| a hair past 1
    np.clip(r, -1.0, 1.0, out=r)
    return AutocorrSeries(r)
