"""
TRNG file ingestion
Offline files of integers (e.g. 1..1,000,000 from an atmospheric-noise service),
one per line or a CSV column named "value". Values are min-max normalised to [0, 1].
"""

import hashlib
import logging
from pathlib import Path
from typing import List, Union

import numpy as np
import pandas as pd

from modules.shared.data_loader import parse_numeric_lines
from modules.shared.errors import ConfigError, FileParseError, InsufficientSamples, ZeroVariance
from modules.shared.signal import Signal

logger = logging.getLogger(__name__)

FORMATS = ('auto', 'lines', 'csv')


def _file_sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, 'rb') as handle:
        for block in iter(lambda: handle.read(1 << 16), b''):
            digest.update(block)
    return digest.hexdigest()


def _read_csv_column(path: Path) -> np.ndarray:
    df = pd.read_csv(path, dtype=str, skip_blank_lines=True)
    if 'value' not in df.columns:
        raise FileParseError(str(path), 1, f"CSV header must contain a 'value' column, got {list(df.columns)}")
    numbers = pd.to_numeric(df['value'].str.strip(), errors='coerce')
    bad = numbers.isna() | (numbers != numbers.round())
    if bad.any():
        row = int(np.flatnonzero(bad.to_numpy())[0])
        # +2: header line and 1-based numbering
        raise FileParseError(str(path), row + 2, f"expected an integer, got {df['value'].iloc[row]!r}")
    return numbers.to_numpy(dtype=np.float64)


def _detect_format(path: Path) -> str:
    with open(path, 'r', encoding='utf-8') as handle:
        for line in handle:
            token = line.strip()
            if token and not token.startswith('#'):
                return 'csv' if token.lower().startswith('value') else 'lines'
    return 'lines'


def ingest_trng_file(path: Union[str, Path], file_format: str = 'auto') -> Signal:
    """
    Load a TRNG integer file as a normalised analog Signal.

    Args:
        path: text file, one integer per line, or CSV with a 'value' column
        file_format: 'auto', 'lines' or 'csv'

    Returns:
        Signal in [0, 1]; meta records sha256, count, raw min and max

    Raises:
        FileParseError: first non-integer token, with its line number
        InsufficientSamples: fewer than 2 values
    """
    path = Path(path)
    if file_format not in FORMATS:
        raise ConfigError(f"unknown TRNG file format '{file_format}', expected one of {FORMATS}")
    if not path.exists():
        raise FileNotFoundError(f"TRNG file not found: {path}")

    fmt = _detect_format(path) if file_format == 'auto' else file_format
    if fmt == 'csv':
        raw = _read_csv_column(path)
    else:
        _, raw = parse_numeric_lines(path, as_int=True)

    if raw.size < 2:
        raise InsufficientSamples(f"{path}: need at least 2 values, found {raw.size}")
    lo, hi = float(raw.min()), float(raw.max())
    if hi == lo:
        raise ZeroVariance(f"{path}: all values are equal, cannot normalise")

    meta = {
        'generator': 'TRNG',
        'source_file': str(path),
        'sha256': _file_sha256(path),
        'count': int(raw.size),
        'raw_min': lo,
        'raw_max': hi,
        'normalize': 'minmax',
    }
    logger.info("ingested %d TRNG values from %s", raw.size, path)
    return Signal((raw - lo) / (hi - lo), meta=meta)


def load_trng_directory(directory: Union[str, Path], pattern: str = '*.txt') -> List[Signal]:
    """Ingest every matching file of a directory in sorted order (the 10-set study layout)."""
    directory = Path(directory)
    if not directory.is_dir():
        raise FileNotFoundError(f"TRNG directory not found: {directory}")
    files = sorted(directory.glob(pattern))
    if not files:
        logger.warning("no TRNG files matching %s in %s", pattern, directory)
    return [ingest_trng_file(f) for f in files]
