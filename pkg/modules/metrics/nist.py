"""
NIST SP 800-22 Approximate Entropy test.

Blocks wrap around the end of the sequence; phi(m) = sum_C C ln C over the
observed frequencies of every m-bit pattern, ApEn = phi(m) - phi(m+1),
chi^2 = 2N (ln 2 - ApEn) and p = igamc(2^(m-1), chi^2 / 2).
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaincc

from modules.shared.config import NIST_ALPHA
from modules.shared.errors import ConfigError, EmbeddingTooLarge, NotBinary
from modules.shared.signal import Signal

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class NistApenResult:
    m: int
    apen: float
    chi_square: float
    p_value: float

    @property
    def is_random(self) -> bool:
        return self.p_value > NIST_ALPHA


def embedding_bound(n_samples: int) -> int:
    """Largest m accepted for N samples: floor(log2 N) - 5."""
    return int(math.floor(math.log2(n_samples))) - 5


def _phi(bits: np.ndarray, m: int) -> float:
    if m == 0:
        return 0.0
    n = bits.size
    idx = np.arange(n)
    codes = np.zeros(n, dtype=np.int64)
    for i in range(m):
        codes = (codes << 1) | bits[(idx + i) % n]
    freq = np.bincount(codes, minlength=1 << m)
    freq = freq[freq > 0] / n
    return float(np.sum(freq * np.log(freq)))


def wraparound_apen(bits, m: int) -> float:
    """phi^m - phi^(m+1) over circularly extended bit patterns (no length bound)."""
    return _phi(np.asarray(bits, dtype=np.int64), m) - _phi(np.asarray(bits, dtype=np.int64), m + 1)


def nist_apen_statistic(signal: Signal, m: int) -> NistApenResult:
    """
    Full NIST approximate entropy statistic for a binary signal.

    Raises:
        NotBinary: signal is not tagged binary
        EmbeddingTooLarge: m > floor(log2 N) - 5
    """
    if not signal.is_binary:
        raise NotBinary(f"the NIST approximate entropy test needs a binary signal, got {signal.domain.value}")
    if m < 1:
        raise ConfigError(f"m must be >= 1, got {m}")
    n = len(signal)
    bound = embedding_bound(n)
    if m > bound:
        raise EmbeddingTooLarge(m, n, bound)

    apen_wrap = wraparound_apen(signal.samples, m)
    chi_square = 2.0 * n * (math.log(2.0) - apen_wrap)
    p_value = float(gammaincc(2.0 ** (m - 1), chi_square / 2.0))
    p_value = min(1.0, max(0.0, p_value))
    logger.debug("NIST ApEn m=%d: apen=%.6f chi2=%.4f p=%.6g", m, apen_wrap, chi_square, p_value)
    return NistApenResult(m=m, apen=apen_wrap, chi_square=chi_square, p_value=p_value)


def apen_nist_pvalue(signal: Signal, m: int) -> float:
    """p-value of the NIST approximate entropy test; <= 0.01 flags the sequence as non-random."""
    return nist_apen_statistic(signal, m).p_value
