"""
Error hierarchy
===============
Every failure raised by the metric kernels, generators, experiments and CLI
derives from ComplexityError. Each class also inherits the builtin a caller
would expect (mostly ValueError), so plain ``except ValueError`` still works.

Exit codes used by the CLI:
    2 - configuration / usage error
    3 - I/O or file content error
    4 - every requested metric failed (set by the CLI, not by an exception)
"""

from typing import Iterable, Optional

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_ALL_METRICS_FAILED = 4


class ComplexityError(Exception):
    """Base class for all library errors."""

    exit_code = EXIT_CONFIG

    @property
    def name(self) -> str:
        return type(self).__name__

    def to_dict(self) -> dict:
        return {'error': self.name, 'message': str(self)}


# ---- Signal validation

class InvalidSignal(ComplexityError, ValueError):
    """Signal violates a structural invariant (shape, domain values)."""


class NonFinite(InvalidSignal):
    """A sample is NaN or infinite."""


class TooShort(InvalidSignal):
    """Signal is too short for the requested computation."""


class ZeroVariance(ComplexityError, ValueError):
    """All samples are equal, so sigma_0 = 0 and nothing can be normalised."""


class NotBinary(InvalidSignal):
    """A binary-only operation received a non-binary signal."""


# ---- Numerical domains

class DomainError(ComplexityError, ValueError):
    """Argument outside the mathematical domain of the function."""


class DegenerateQ(DomainError):
    """q = 1 was passed to a q-deformed function; use the natural log/exp."""


class SingularInput(DomainError):
    """Argument sits exactly on a pole of the function."""


class SingularAutocorrelation(ComplexityError, ValueError):
    """An autocorrelation value is at (or numerically below) -1."""

    def __init__(self, lag: int, value: float):
        self.lag = int(lag)
        self.value = float(value)
        super().__init__(f"r_{self.lag} = {self.value:.12g} <= -1 + eps: disentropy diverges")


class EmbeddingTooLarge(ComplexityError, ValueError):
    """Embedding dimension exceeds floor(log2 N) - 5 for the NIST test."""

    def __init__(self, m: int, n_samples: int, bound: int):
        self.m = int(m)
        self.n_samples = int(n_samples)
        self.bound = int(bound)
        super().__init__(
            f"m={self.m} refused for N={self.n_samples}: the NIST approximate entropy test "
            f"requires m < floor(log2 N) - 5, evaluated here up to m <= {self.bound}"
        )


class UndefinedEntropy(ComplexityError, ValueError):
    """A similarity sum vanished, so the entropy logarithm is undefined."""


# ---- Generators and configuration

class ConfigError(ComplexityError, ValueError):
    """Inconsistent or out-of-range parameters."""


class LevelOutOfRange(ConfigError):
    """Quantizer level count outside [2, 10]."""


class UnknownPreset(ConfigError):
    def __init__(self, name: str, valid: Iterable[str]):
        self.preset = name
        self.valid = sorted(valid)
        super().__init__(f"unknown preset '{name}'. Valid presets: {', '.join(self.valid)}")


class UnknownExperiment(ConfigError):
    def __init__(self, name: str, valid: Iterable[str]):
        self.experiment = name
        self.valid = sorted(valid)
        super().__init__(f"unknown experiment '{name}'. Valid experiments: {', '.join(self.valid)}")


class EmptyList(ConfigError):
    """An operation that needs at least one element received none."""


class MixedDomain(ConfigError):
    """Signals with different domain tags cannot be concatenated."""


# ---- Files

class FileParseError(ComplexityError, ValueError):
    exit_code = EXIT_IO

    def __init__(self, path: str, line: Optional[int], detail: str):
        self.path = str(path)
        self.line = line
        where = f"{self.path}:{line}" if line is not None else self.path
        super().__init__(f"{where}: {detail}")


class InsufficientSamples(ComplexityError, ValueError):
    exit_code = EXIT_IO
