"""
Signal sources
==============
GeneratorSpec describes where samples come from (LCG, MT19937 or a TRNG
file) and how they are normalised; generate() turns it into a Signal.

MT19937 doubles come from numpy's legacy RandomState: integer seeds go
through init_genrand and every double is built from two 32-bit words as
((a >> 5) * 2^26 + (b >> 6)) / 2^53.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from modules.generators.lcg import LCG_PRESETS, LcgParams, lcg_sequence
from modules.generators.trng import ingest_trng_file
from modules.shared.config import DEFAULT_N
from modules.shared.errors import ConfigError, InsufficientSamples, UnknownPreset, ZeroVariance
from modules.shared.signal import Signal

logger = logging.getLogger(__name__)

VARIANTS = ('lcg', 'mt19937', 'file')
NORMALIZATIONS = ('by_modulus', 'minmax', 'none')

MT_PRESETS = {
    'mt0': ('MT0', 0),
    'mts': ('MTS', 1773456103),
}


def preset_names() -> list:
    return sorted(list(LCG_PRESETS) + list(MT_PRESETS))


def display_name(preset: str) -> str:
    if preset in LCG_PRESETS:
        return LCG_PRESETS[preset][0]
    if preset in MT_PRESETS:
        return MT_PRESETS[preset][0]
    return preset


@dataclass(frozen=True)
class GeneratorSpec:
    """
    Attributes:
        variant: 'lcg', 'mt19937' or 'file'
        n: number of samples
        lcg: LCG parameters (variant 'lcg')
        seed: MT19937 seed (variant 'mt19937'), 32-bit unsigned
        path / file_format: TRNG file (variant 'file')
        normalize: 'by_modulus' (LCG: x/(M-1)), 'minmax' or 'none'
        name: label carried into the signal metadata
    """

    variant: str
    n: int = DEFAULT_N
    lcg: Optional[LcgParams] = None
    seed: int = 0
    path: Optional[str] = None
    file_format: str = 'auto'
    normalize: str = 'by_modulus'
    name: Optional[str] = None

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ConfigError(f"unknown generator variant '{self.variant}', expected one of {VARIANTS}")
        if self.normalize not in NORMALIZATIONS:
            raise ConfigError(f"unknown normalization '{self.normalize}', expected one of {NORMALIZATIONS}")
        if int(self.n) < 2:
            raise ConfigError(f"generator length must be >= 2, got {self.n}")
        if self.variant == 'lcg' and self.lcg is None:
            raise ConfigError("lcg variant needs LcgParams")
        if self.variant == 'mt19937' and not 0 <= int(self.seed) < 2 ** 32:
            raise ConfigError(f"MT19937 seed must be a 32-bit unsigned integer, got {self.seed}")
        if self.variant == 'file' and not self.path:
            raise ConfigError("file variant needs a path")

    @classmethod
    def from_preset(cls, preset: str, n: int = DEFAULT_N, seed: Optional[int] = None) -> 'GeneratorSpec':
        """Build a spec from a preset name; seed overrides x0 (LCG) or the MT seed."""
        if preset in LCG_PRESETS:
            params = LCG_PRESETS[preset][1]
            if seed is not None:
                params = params.with_seed(seed)
            return cls('lcg', n=n, lcg=params, name=preset)
        if preset in MT_PRESETS:
            mt_seed = MT_PRESETS[preset][1] if seed is None else seed
            return cls('mt19937', n=n, seed=mt_seed, normalize='none', name=preset)
        raise UnknownPreset(preset, preset_names())

    @property
    def effective_seed(self) -> Optional[int]:
        """x0 for an LCG, the MT seed for MT19937, None for a file."""
        if self.variant == 'lcg':
            return int(self.lcg.seed)
        if self.variant == 'mt19937':
            return int(self.seed)
        return None

    @classmethod
    def mt(cls, seed: int, n: int = DEFAULT_N) -> 'GeneratorSpec':
        return cls('mt19937', n=n, seed=seed, normalize='none', name=f"mt-{seed}")

    def describe(self) -> dict:
        info = {'variant': self.variant, 'n': self.n, 'normalize': self.normalize}
        if self.name:
            info['preset'] = self.name
        if self.variant == 'lcg':
            info.update(self.lcg.to_dict())
        elif self.variant == 'mt19937':
            info['seed'] = int(self.seed)
        else:
            info['path'] = self.path
        return info


# ---- MT19937

def mt19937_doubles(seed: int, n: int) -> np.ndarray:
    """n doubles in [0, 1) from MT19937 seeded with init_genrand(seed)."""
    return np.random.RandomState(int(seed)).random_sample(n)


def mt19937_words(seed: int, count: int) -> np.ndarray:
    """Raw 32-bit outputs of the same stream."""
    return np.random.RandomState(int(seed)).randint(0, 2 ** 32, size=count, dtype=np.uint32)


def words_to_doubles(words: np.ndarray) -> np.ndarray:
    """53-bit doubles from consecutive word pairs."""
    words = np.asarray(words, dtype=np.uint64)
    hi = words[0::2] >> np.uint64(5)
    lo = words[1::2] >> np.uint64(6)
    return (hi.astype(np.float64) * 67108864.0 + lo.astype(np.float64)) / 9007199254740992.0


# ---- Normalization

def minmax_normalize(values: np.ndarray) -> np.ndarray:
    lo, hi = float(np.min(values)), float(np.max(values))
    if hi == lo:
        raise ZeroVariance("min-max normalization undefined: all values are equal")
    return (values - lo) / (hi - lo)


def generate(spec: GeneratorSpec) -> Signal:
    """
    Produce the analog signal described by a GeneratorSpec.

    Returns:
        Signal of length spec.n, values in [0, 1] unless normalize='none' on raw LCG output
    """
    meta = spec.describe()
    if spec.name:
        meta['generator'] = display_name(spec.name)

    if spec.variant == 'lcg':
        raw = lcg_sequence(spec.lcg, spec.n).astype(np.float64)
        if spec.normalize == 'by_modulus':
            values = raw / (spec.lcg.modulus - 1)
        elif spec.normalize == 'minmax':
            values = minmax_normalize(raw)
        else:
            values = raw
    elif spec.variant == 'mt19937':
        values = mt19937_doubles(spec.seed, spec.n)
        if spec.normalize == 'minmax':
            values = minmax_normalize(values)
    else:
        source = ingest_trng_file(spec.path, spec.file_format)
        if len(source) < spec.n:
            raise InsufficientSamples(f"{spec.path}: need {spec.n} samples, file has {len(source)}")
        meta.update(source.meta)
        values = source.samples[:spec.n]
        if spec.normalize == 'minmax' and spec.n < len(source):
            values = minmax_normalize(values)

    logger.debug("generated %s", meta)
    return Signal(values, meta=meta)
