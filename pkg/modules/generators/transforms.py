"""
Signal transforms: comparator, multi-level quantizer, periodic line injection
and concatenation. All transforms are pure and return new Signals.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from modules.shared.errors import ConfigError, EmptyList, LevelOutOfRange, MixedDomain
from modules.shared.signal import Domain, Signal

logger = logging.getLogger(__name__)

MIN_LEVELS, MAX_LEVELS = 2, 10
MAX_NOISE_SIGMA = 0.1


def binarize(signal: Signal, threshold: float = 0.5) -> Signal:
    """Comparator: sample >= threshold -> 1, else 0."""
    bits = (signal.samples >= threshold).astype(np.float64)
    return signal.derive(bits, domain=Domain.BINARY, threshold=threshold)


def quantize_levels(signal: Signal, levels: int, noise_sigma: float = 0.0,
                    noise_seed: Optional[int] = 0) -> Signal:
    """
    Snap samples to the nearest of `levels` equispaced values on [0, 1],
    then add N(0, noise_sigma^2) noise drawn from MT19937(noise_seed).

    Ties between two levels go to the higher one.
    """
    if not MIN_LEVELS <= int(levels) <= MAX_LEVELS:
        raise LevelOutOfRange(f"levels must be in [{MIN_LEVELS}, {MAX_LEVELS}], got {levels}")
    if not 0.0 <= noise_sigma <= MAX_NOISE_SIGMA:
        raise ConfigError(f"noise_sigma must be in [0, {MAX_NOISE_SIGMA}], got {noise_sigma}")

    steps = int(levels) - 1
    index = np.clip(np.floor(signal.samples * steps + 0.5), 0, steps)
    values = index / steps
    if noise_sigma > 0:
        values = values + np.random.RandomState(noise_seed).normal(0.0, noise_sigma, size=values.size)

    return signal.derive(values, domain=Domain.MULTILEVEL, levels=int(levels),
                         noise_sigma=float(noise_sigma), noise_seed=noise_seed)


@dataclass(frozen=True)
class LineInjection:
    """
    Diagonal line overwriting every `period`-th sample from `start`.

    Occurrence j gets offset + slope * j, wrapped into [0, 1]. With slope=None
    the ramp spans [offset, 1] across the occurrences that fit in the signal.
    """

    period: int
    start: int = 0
    offset: float = 0.0
    slope: Optional[float] = None

    def __post_init__(self):
        if int(self.period) < 1:
            raise ConfigError(f"line period must be >= 1, got {self.period}")
        if self.start < 0:
            raise ConfigError(f"line start must be >= 0, got {self.start}")
        if not 0.0 <= self.offset <= 1.0:
            raise ConfigError(f"line offset must be in [0, 1], got {self.offset}")

    def positions(self, n: int) -> np.ndarray:
        return np.arange(self.start, n, int(self.period))

    def values(self, count: int) -> np.ndarray:
        j = np.arange(count, dtype=np.float64)
        if self.slope is not None:
            slope = self.slope
        else:
            slope = (1.0 - self.offset) / (count - 1) if count > 1 else 0.0
        ramp = self.offset + slope * j
        # rounding slack at the ends of a full-range ramp is not a wrap
        outside = (ramp < -1e-12) | (ramp > 1.0 + 1e-12)
        return np.where(outside, np.mod(ramp, 1.0), np.clip(ramp, 0.0, 1.0))


def inject_line(signal: Signal, inj: LineInjection) -> Signal:
    """Overwrite every inj.period-th sample with the ramp; other samples untouched."""
    n = len(signal)
    if inj.start >= n:
        raise ConfigError(f"line start {inj.start} is beyond the signal length {n}")
    pos = inj.positions(n)
    out = signal.samples.copy()
    out[pos] = inj.values(pos.size)
    return signal.derive(out, line_period=int(inj.period), line_start=int(inj.start))


def concatenate(responses: Sequence[Signal]) -> Signal:
    """Join signals in order; all must share the same domain."""
    if not responses:
        raise EmptyList("cannot concatenate an empty list of signals")
    first = responses[0]
    for sig in responses[1:]:
        if sig.domain is not first.domain or sig.levels != first.levels:
            raise MixedDomain(
                f"cannot concatenate {first.domain.value} with {sig.domain.value} signals"
            )
    if len(responses) == 1:
        return first

    sources = [sig.meta.get('response_id', idx) for idx, sig in enumerate(responses)]
    return first.derive(
        np.concatenate([sig.samples for sig in responses]),
        concatenated_from=len(responses),
        sources=sources,
    )
