"""
Signal value type shared by generators, metrics and experiments.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional

import numpy as np

from modules.shared.errors import InvalidSignal, NonFinite, TooShort


class Domain(str, Enum):
    ANALOG = 'analog'
    BINARY = 'binary'
    MULTILEVEL = 'multilevel'


@dataclass(frozen=True)
class Signal:
    """
    Ordered real-valued samples with a domain tag and provenance metadata.

    The sample array is copied on construction and made read-only, so a
    Signal can be handed to worker processes and threads freely.

    Attributes:
        samples: 1-D float64 array, N >= 2, all finite
        domain: analog, binary (samples in {0, 1}) or multilevel
        levels: level count for multilevel signals, None otherwise
        meta: free-form provenance (generator, seed, normalization, ...)
    """

    samples: np.ndarray
    domain: Domain = Domain.ANALOG
    levels: Optional[int] = None
    meta: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        values = np.array(self.samples, dtype=np.float64, copy=True)
        if values.ndim != 1:
            raise InvalidSignal(f"samples must be one-dimensional, got shape {values.shape}")
        if values.size < 2:
            raise TooShort(f"a signal needs at least 2 samples, got {values.size}")
        if not np.all(np.isfinite(values)):
            bad = int(np.flatnonzero(~np.isfinite(values))[0])
            raise NonFinite(f"sample {bad} is not finite ({values[bad]})")

        domain = Domain(self.domain)
        if domain is Domain.BINARY and not np.all((values == 0.0) | (values == 1.0)):
            raise InvalidSignal("binary signal contains values other than 0 and 1")
        if domain is Domain.MULTILEVEL and (self.levels is None or self.levels < 2):
            raise InvalidSignal("multilevel signal needs levels >= 2")

        values.setflags(write=False)
        object.__setattr__(self, 'samples', values)
        object.__setattr__(self, 'domain', domain)
        object.__setattr__(self, 'meta', dict(self.meta))

    def __len__(self) -> int:
        return int(self.samples.size)

    @property
    def n_samples(self) -> int:
        return len(self)

    @property
    def is_binary(self) -> bool:
        return self.domain is Domain.BINARY

    def derive(self, samples: np.ndarray, domain: Optional[Domain] = None,
               levels: Optional[int] = None, **meta: Any) -> 'Signal':
        """New signal built from this one; metadata is merged, new keys win."""
        merged = dict(self.meta)
        merged.update(meta)
        new_domain = Domain(domain) if domain is not None else self.domain
        if new_domain is not Domain.MULTILEVEL:
            levels = None
        elif levels is None:
            levels = self.levels
        return Signal(samples, domain=new_domain, levels=levels, meta=merged)

    def describe(self) -> str:
        tag = self.domain.value if self.levels is None else f"{self.domain.value}({self.levels})"
        source = self.meta.get('preset') or self.meta.get('generator') or 'signal'
        return f"{source} [{tag}] N={len(self)}"
