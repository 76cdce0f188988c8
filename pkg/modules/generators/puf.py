"""
Simulated PUF responses
=======================
A fleet of PUF instances, each producing n_responses responses of
response_len samples. Base samples come from MT19937 with seed
base_seed + instance, so a reference fleet and a defective fleet built from
the same config differ only by the defect.

Defects:
    none          reference behaviour
    dynamics      a draw >= high forces the next sample to low_value,
                  a draw <= low forces it to high_value
    fixed_prefix  the first samples of every response are overwritten
    fixed_sample  one index of every response is forced to a value
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import List, Tuple

import numpy as np

from modules.generators.sources import mt19937_doubles
from modules.shared.errors import ConfigError
from modules.shared.signal import Signal

logger = logging.getLogger(__name__)

DEFECTS = ('none', 'dynamics', 'fixed_prefix', 'fixed_sample')


@dataclass(frozen=True)
class PufConfig:
    response_len: int = 128
    n_responses: int = 100
    n_instances: int = 100
    defect: str = 'none'
    seed: int = 0
    # dynamics
    low: float = 0.1
    high: float = 0.9
    low_value: float = 0.1
    high_value: float = 0.9
    cascade: bool = False
    # fixed_prefix / fixed_sample
    prefix_values: Tuple[float, ...] = (0.2, 0.1)
    sample_index: int = 0
    sample_value: float = 0.5

    def __post_init__(self):
        if self.defect not in DEFECTS:
            raise ConfigError(f"unknown PUF defect '{self.defect}', expected one of {DEFECTS}")
        if self.response_len < 2:
            raise ConfigError(f"response length must be >= 2, got {self.response_len}")
        if self.n_responses < 1 or self.n_instances < 1:
            raise ConfigError("a PUF fleet needs at least one instance and one response")
        if len(self.prefix_values) >= self.response_len:
            raise ConfigError(
                f"prefix of length {len(self.prefix_values)} does not fit in responses of {self.response_len}"
            )
        if not 0 <= self.sample_index < self.response_len:
            raise ConfigError(f"sample index {self.sample_index} outside [0, {self.response_len})")
        injected = list(self.prefix_values) + [self.sample_value, self.low_value, self.high_value]
        if any(not 0.0 <= v <= 1.0 for v in injected):
            raise ConfigError(f"injected PUF values must lie in [0, 1], got {injected}")
        object.__setattr__(self, 'prefix_values', tuple(float(v) for v in self.prefix_values))

    def reference(self) -> 'PufConfig':
        """Same fleet without a defect."""
        return replace(self, defect='none')


def apply_dynamics(base: np.ndarray, cfg: PufConfig) -> np.ndarray:
    """
    Deterministic dynamics on a (responses, n) block.

    The trigger is read from the base draw at k-1. With cascade=True the rule
    runs in place over the already modified samples instead, which locks a
    response into low/high alternation after the first trigger.
    """
    out = base.copy()
    if cfg.cascade:
        for k in range(1, out.shape[1]):
            prev = out[:, k - 1]
            hi = prev >= cfg.high
            lo = ~hi & (prev <= cfg.low)
            out[hi, k] = cfg.low_value
            out[lo, k] = cfg.high_value
        return out

    prev = base[:, :-1]
    tail = out[:, 1:]
    tail[prev >= cfg.high] = cfg.low_value
    tail[(prev < cfg.high) & (prev <= cfg.low)] = cfg.high_value
    return out


def instance_block(cfg: PufConfig, instance: int) -> np.ndarray:
    """(n_responses, response_len) samples of one instance after the defect."""
    base = mt19937_doubles(cfg.seed + instance, cfg.n_responses * cfg.response_len)
    block = base.reshape(cfg.n_responses, cfg.response_len)

    if cfg.defect == 'dynamics':
        return apply_dynamics(block, cfg)
    block = block.copy()
    if cfg.defect == 'fixed_prefix':
        block[:, :len(cfg.prefix_values)] = cfg.prefix_values
    elif cfg.defect == 'fixed_sample':
        block[:, cfg.sample_index] = cfg.sample_value
    return block


def puf_instance_responses(cfg: PufConfig, instance: int) -> List[Signal]:
    block = instance_block(cfg, instance)
    meta = {'generator': 'PUF', 'defect': cfg.defect, 'instance': instance, 'seed': cfg.seed + instance}
    return [Signal(row, meta=dict(meta, response_id=i)) for i, row in enumerate(block)]


def puf_responses(cfg: PufConfig) -> List[List[Signal]]:
    """
    Responses of every instance of the fleet.

    Returns:
        fleet[instance][response] -> Signal of response_len samples
    """
    logger.info("simulating %d PUF instances x %d responses (%s)", cfg.n_instances, cfg.n_responses, cfg.defect)
    return [puf_instance_responses(cfg, i) for i in range(cfg.n_instances)]


def instance_concatenation(cfg: PufConfig, instance: int) -> Signal:
    """C_i: all responses of one instance joined in order (no per-response Signal objects)."""
    block = instance_block(cfg, instance)
    meta = {
        'generator': 'PUF', 'defect': cfg.defect, 'instance': instance, 'seed': cfg.seed + instance,
        'concatenated_from': cfg.n_responses,
    }
    return Signal(block.reshape(-1), meta=meta)
