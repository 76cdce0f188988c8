"""
Approximate Entropy and Fuzzy Entropy
=====================================
Both statistics compare every length-m template of the signal with every
other one under the Chebyshev (max-abs) distance:

- ApEn (Pincus): hard match d <= r, self-matches included, so every count
  is >= 1 and the logarithm is always defined.
- FuzEn: the match indicator is replaced by a membership degree f(d; r) in
  [0, 1]; the signal is z-scored, N - m templates are used for both
  dimensions and self-pairs are excluded.

Distances are produced in row chunks with scipy's cdist so memory stays
bounded at N = 10^4 and beyond.
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass
from typing import Callable, Dict, Optional

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.spatial.distance import cdist

from modules.shared.config import DEFAULT_APEN_R, DEFAULT_FUZEN_R, DEFAULT_MEMBERSHIP
from modules.shared.errors import ConfigError, TooShort, UndefinedEntropy, ZeroVariance
from modules.shared.signal import Signal

logger = logging.getLogger(__name__)

# Upper bound on distance-matrix elements held at once
CHUNK_ELEMENTS = 4_000_000


# ---- Membership functions (d >= 0, r > 0, f(0) = 1)

def _triangular(d, r, power):
    return np.clip(1.0 - d / r, 0.0, None)


def _trapezoidal(d, r, power):
    return np.clip(2.0 - d / r, 0.0, 1.0)


def _z_shaped(d, r, power):
    out = np.zeros_like(d)
    out[d <= r] = 1.0
    rise = (d > r) & (d <= 1.5 * r)
    out[rise] = 1.0 - 2.0 * ((d[rise] - r) / r) ** 2
    tail = (d > 1.5 * r) & (d <= 2.0 * r)
    out[tail] = 2.0 * ((d[tail] - 2.0 * r) / r) ** 2
    return out


def _bell_shaped(d, r, power):
    return 1.0 / (1.0 + np.abs(d / r) ** (2.0 * power))


def _gaussian(d, r, power):
    return np.exp(-(d * d) / (2.0 * r * r))


def _constant_gaussian(d, r, power):
    out = np.ones_like(d)
    beyond = d > r
    out[beyond] = np.exp(-np.log(2.0) * ((d[beyond] - r) / r) ** 2)
    return out


def _exponential(d, r, power):
    return np.exp(-(d ** power) / r)


MEMBERSHIP_FUNCTIONS: Dict[str, Callable[[np.ndarray, float, float], np.ndarray]] = {
    'triangular': _triangular,
    'trapezoidal': _trapezoidal,
    'z_shaped': _z_shaped,
    'bell_shaped': _bell_shaped,
    'gaussian': _gaussian,
    'constant_gaussian': _constant_gaussian,
    'exponential': _exponential,
}


def membership(name: str, d, r: float, power: float = 2.0) -> np.ndarray:
    """Evaluate a named membership function on distances d."""
    try:
        func = MEMBERSHIP_FUNCTIONS[name]
    except KeyError:
        raise ConfigError(
            f"unknown membership '{name}', expected one of {sorted(MEMBERSHIP_FUNCTIONS)}"
        ) from None
    return func(np.asarray(d, dtype=np.float64), float(r), float(power))


@dataclass(frozen=True)
class EntropyParams:
    """
    Parameters of one ApEn/FuzEn evaluation.

    r_factor multiplies sigma_0 (ApEn) or is the tolerance on the z-scored
    signal (FuzEn), which is the same thing. power is the exponent of the
    exponential and bell-shaped memberships. baseline_removal subtracts each
    template's own mean before distances (FuzEn only).
    """

    m: int = 2
    r_factor: float = DEFAULT_APEN_R
    membership: str = DEFAULT_MEMBERSHIP
    power: float = 2.0
    baseline_removal: bool = False

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise ConfigError(f"embedding dimension m must be an integer >= 1, got {self.m}")
        if not self.r_factor > 0:
            raise ConfigError(f"r_factor must be positive, got {self.r_factor}")
        if self.membership not in MEMBERSHIP_FUNCTIONS:
            raise ConfigError(
                f"unknown membership '{self.membership}', expected one of {sorted(MEMBERSHIP_FUNCTIONS)}"
            )
        if not self.power > 0:
            raise ConfigError(f"membership power must be positive, got {self.power}")
        object.__setattr__(self, 'm', int(self.m))

    @classmethod
    def for_apen(cls, m: int, r_factor: float = DEFAULT_APEN_R) -> 'EntropyParams':
        return cls(m=m, r_factor=r_factor)

    @classmethod
    def for_fuzen(cls, m: int, r_factor: float = DEFAULT_FUZEN_R,
                  membership: str = DEFAULT_MEMBERSHIP, power: float = 2.0,
                  baseline_removal: bool = False) -> 'EntropyParams':
        return cls(m=m, r_factor=r_factor, membership=membership, power=power,
                   baseline_removal=baseline_removal)

    def to_dict(self) -> dict:
        return asdict(self)


# ---- Utilities

def _check_signal(x: np.ndarray, m: int) -> float:
    if x.size <= m + 1:
        raise TooShort(f"need N > m + 1 samples, got N={x.size} for m={m}")
    sd = float(np.std(x, ddof=1))
    if not sd > 0.0:
        raise ZeroVariance("entropy undefined: all samples are equal")
    return sd


def _row_chunks(n_rows: int, n_cols: int):
    step = max(1, CHUNK_ELEMENTS // max(1, n_cols))
    for start in range(0, n_rows, step):
        yield start, min(n_rows, start + step)


def match_counts(templates: np.ndarray, r: float) -> np.ndarray:
    """Number of templates within Chebyshev distance r of each template (self included)."""
    n = templates.shape[0]
    counts = np.empty(n, dtype=np.int64)
    for start, stop in _row_chunks(n, n):
        dist = cdist(templates[start:stop], templates, metric='chebyshev')
        counts[start:stop] = np.count_nonzero(dist <= r, axis=1)
    return counts


def membership_total(templates: np.ndarray, r: float, name: str, power: float) -> float:
    """Sum of f(d_ij) over all ordered pairs i != j."""
    n = templates.shape[0]
    total = 0.0
    for start, stop in _row_chunks(n, n):
        dist = cdist(templates[start:stop], templates, metric='chebyshev')
        total += float(membership(name, dist, r, power).sum())
    # diagonal terms are f(0) = 1
    return total - n


# ---- Approximate entropy

def _apen_phi(x: np.ndarray, m: int, r: float) -> float:
    templates = sliding_window_view(x, m)
    n = templates.shape[0]
    counts = match_counts(templates, r)
    return float(np.mean(np.log(counts / n)))


def apen_floor(n: int, m: int) -> float:
    """
    Lowest value apen() can return for N samples: the m-template count has
    one more template than the (m+1) count and a larger denominator, so
    ApEn >= -ln(N-m+1)/(N-m+1) - ln(1 + 1/(N-m)).
    """
    k = n - m
    return -math.log(k + 1) / (k + 1) - math.log1p(1.0 / k)


def apen(signal: Signal, params: Optional[EntropyParams] = None) -> float:
    """
    Approximate Entropy phi^m(r) - phi^{m+1}(r) with r = r_factor * std(ddof=1).

    Self-matches keep every log finite. Near-deterministic signals (a ramp,
    a constant pattern) can land slightly below zero, never below
    apen_floor(N, m), about -1e-3 at N = 10000.

    Args:
        signal: input Signal
        params: EntropyParams (m, r_factor); defaults to m=2, r_factor=0.2

    Returns:
        ApEn value, >= apen_floor(N, m)
    """
    params = params or EntropyParams.for_apen(2)
    x = signal.samples
    sd = _check_signal(x, params.m)
    r = params.r_factor * sd
    return _apen_phi(x, params.m, r) - _apen_phi(x, params.m + 1, r)


# ---- Fuzzy entropy

def _fuzen_phi(z: np.ndarray, k: int, n: int, params: EntropyParams) -> float:
    templates = sliding_window_view(z, k)[:n]
    if params.baseline_removal:
        templates = templates - templates.mean(axis=1, keepdims=True)
    total = membership_total(templates, params.r_factor, params.membership, params.power)
    if not total > 0.0:
        raise UndefinedEntropy(
            f"no similar template pairs at dimension {k} (r={params.r_factor}, {params.membership})"
        )
    return float(np.log(total / (n * (n - 1))))


def fuzen(signal: Signal, params: Optional[EntropyParams] = None) -> float:
    """
    Fuzzy Entropy on the z-scored signal.

    Args:
        signal: input Signal
        params: EntropyParams; defaults to m=2, r=0.1253, gaussian membership

    Returns:
        phi^m - phi^{m+1}, each phi the log of the mean pairwise membership

    Raises:
        UndefinedEntropy: when no pair has non-zero membership
    """
    params = params or EntropyParams.for_fuzen(2)
    x = signal.samples
    sd = _check_signal(x, params.m)
    z = (x - x.mean()) / sd
    n = z.size - params.m
    return _fuzen_phi(z, params.m, n, params) - _fuzen_phi(z, params.m + 1, n, params)
