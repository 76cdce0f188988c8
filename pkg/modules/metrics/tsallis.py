"""
Tsallis support functions and the disentropy of autocorrelation.

For q = 2 the Lambert-Tsallis function has the closed form W2(z) = z/(z+1),
and the disentropy of an autocorrelation series reduces to

    D2 = sum_k r_k^3 / (r_k + 1)

whose ideal value is 0.5 (r_0 = 1, every other lag 0). The score reported
by the toolkit is D = |D2 - 0.5|.
"""

import logging
import math

import numpy as np

from modules.metrics.autocorrelation import AutocorrSeries, autocorrelation
from modules.shared.config import SINGULARITY_EPS
from modules.shared.errors import DegenerateQ, DomainError, SingularAutocorrelation, SingularInput
from modules.shared.signal import Signal

logger = logging.getLogger(__name__)

IDEAL_D2 = 0.5


def q_log(x: float, q: float) -> float:
    """
    Tsallis q-logarithm ln_q(x) = (x^(1-q) - 1) / (1 - q).

    Evaluated as expm1((1-q) ln x) / (1-q), which stays accurate as q -> 1.
    """
    if q == 1:
        raise DegenerateQ("q_log with q = 1 is the natural logarithm")
    if not x > 0:
        raise DomainError(f"q_log requires x > 0, got {x}")
    k = 1.0 - q
    return math.expm1(k * math.log(x)) / k


def q_exp(x: float, q: float) -> float:
    """Tsallis q-exponential exp_q(x) = (1 + (1-q) x)^(1/(1-q))."""
    if q == 1:
        raise DegenerateQ("q_exp with q = 1 is the natural exponential")
    k = 1.0 - q
    base = 1.0 + k * x
    if base < 0:
        raise DomainError(f"q_exp undefined: 1 + (1-q)x = {base} < 0")
    if base == 0:
        return math.inf if k < 0 else 0.0
    return math.exp(math.log(base) / k)


def w2(z: float) -> float:
    """Closed-form Lambert-Tsallis W_2(z) = z / (z + 1), defined for z > -1."""
    if z == -1:
        raise SingularInput("W2 has a pole at z = -1 (perfect anti-correlation)")
    if z < -1:
        raise DomainError(f"W2 is defined for z > -1, got {z}")
    return z / (z + 1.0)


def disentropy_contributions(acf: AutocorrSeries, eps: float = SINGULARITY_EPS) -> np.ndarray:
    """
    Per-lag terms r_k^3 / (r_k + 1).

    Raises:
        SingularAutocorrelation: for the first lag with r_k <= -1 + eps
    """
    r = acf.values
    singular = np.flatnonzero(r <= -1.0 + eps)
    if singular.size:
        lag = int(singular[0])
        raise SingularAutocorrelation(lag, r[lag])
    return r ** 3 / (r + 1.0)


def disentropy(acf: AutocorrSeries, eps: float = SINGULARITY_EPS) -> float:
    """D2 = sum over all lags of r_k^3 / (r_k + 1), compensated summation."""
    return math.fsum(disentropy_contributions(acf, eps=eps))


def disentropy_score(signal: Signal, method: str = 'auto') -> float:
    """D = |D2 - 0.5| for a signal; 0 for an ideal delta-like autocorrelation."""
    d2 = disentropy(autocorrelation(signal, method=method))
    return abs(d2 - IDEAL_D2)


def dominant_lags(acf: AutocorrSeries, top: int = 5) -> list:
    """Lags (k >= 1) with the largest absolute disentropy contribution."""
    terms = disentropy_contributions(acf)[1:]
    order = np.argsort(-np.abs(terms))[:top]
    return [(int(k) + 1, float(terms[k])) for k in order]
