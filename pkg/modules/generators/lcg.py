"""
Linear congruential generators x_{k+1} = (a x_k + c) mod M.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from modules.shared.errors import ConfigError, UnknownPreset

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LcgParams:
    modulus: int
    multiplier: int
    increment: int
    seed: int = 1

    def __post_init__(self):
        if self.modulus < 2:
            raise ConfigError(f"LCG modulus must be >= 2, got {self.modulus}")
        for label in ('multiplier', 'increment', 'seed'):
            value = getattr(self, label)
            if not 0 <= value < self.modulus:
                raise ConfigError(f"LCG {label} must lie in [0, {self.modulus}), got {value}")

    def with_seed(self, seed: int) -> 'LcgParams':
        return LcgParams(self.modulus, self.multiplier, self.increment, seed)

    def to_dict(self) -> dict:
        return {'M': self.modulus, 'a': self.multiplier, 'c': self.increment, 'x0': self.seed}


# Preset name -> (display name, parameters). Every preset starts from x0 = 1.
LCG_PRESETS = {
    'msg': ('MSG', LcgParams(2 ** 31 - 1, 16807, 0)),
    'cpp11': ('C++11 minstd_rand', LcgParams(2 ** 31 - 1, 48271, 0)),
    'gnu-c': ('GNU C rand', LcgParams(2 ** 31, 1103515245, 12345)),
    'lcg-bad': ('LCG Bad', LcgParams(5000, 17, 256)),
    'lcg1': ('LCG 1', LcgParams(2 ** 20, 1487, 25436)),
    'lcg2': ('LCG 2', LcgParams(2 ** 20, 1487, 25236)),
    'lcg3': ('LCG 3', LcgParams(2 ** 20, 1487, 25336)),
    'lcg4': ('LCG 4', LcgParams(2 ** 19, 1487, 25336)),
}


def get_lcg_preset(name: str) -> LcgParams:
    try:
        return LCG_PRESETS[name][1]
    except KeyError:
        raise UnknownPreset(name, LCG_PRESETS) from None


def lcg_next(state: int, params: LcgParams) -> int:
    """One step of the recursion; Python ints keep a*x exact for any modulus."""
    return (params.multiplier * int(state) + params.increment) % params.modulus


def lcg_sequence(params: LcgParams, n: int) -> np.ndarray:
    """
    First n outputs x_1..x_n after the seed.

    Returns:
        int64 array of length n
    """
    out = np.empty(n, dtype=np.int64)
    a, c, mod = params.multiplier, params.increment, params.modulus
    x = params.seed
    for i in range(n):
        x = (a * x + c) % mod
        out[i] = x
    return out


def lcg_period(params: LcgParams, max_steps: Optional[int] = 10_000_000) -> Optional[int]:
    """
    Minimal cycle length of the orbit from the seed (Brent's algorithm).

    Returns:
        Period, or None if it was not found within max_steps
    """
    power = lam = 1
    tortoise = params.seed
    hare = lcg_next(tortoise, params)
    steps = 1
    while tortoise != hare:
        if power == lam:
            tortoise = hare
            power *= 2
            lam = 0
        hare = lcg_next(hare, params)
        lam += 1
        steps += 1
        if max_steps is not None and steps > max_steps:
            logger.info("no cycle within %d steps for %s", max_steps, params.to_dict())
            return None
    return lam
