"""
Shared data loader
Reads and writes signal text files and provides atomic file output.

Signal file format (UTF-8):
    # key: value          optional header comments
    0.53283302290353895   one sample per line, 17 significant digits
"""

import logging
import os
import tempfile
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple, Union

import numpy as np

from modules.shared.errors import FileParseError, InsufficientSamples
from modules.shared.signal import Domain, Signal

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

SAMPLE_FORMAT = '%.17g'


def atomic_write_text(path: PathLike, text: str) -> Path:
    """
    Write text to path through a temp file in the same directory + os.replace.

    Returns:
        The final path.
    """
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)

    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", suffix='.tmp', dir=str(path.parent))
    try:
        with os.fdopen(fd, 'w', encoding='utf-8', newline='') as handle:
            handle.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise
    return path


def format_signal(signal: Signal) -> str:
    """Render a signal in the text file format."""
    header = [f"# domain: {signal.domain.value}"]
    if signal.levels is not None:
        header.append(f"# levels: {signal.levels}")
    for key in sorted(signal.meta):
        value = signal.meta[key]
        if isinstance(value, (list, tuple, dict)):
            continue
        header.append(f"# {key}: {value}")
    body = [SAMPLE_FORMAT % value for value in signal.samples]
    return '\n'.join(header + body) + '\n'


def write_signal_file(signal: Signal, path: PathLike) -> Path:
    path = atomic_write_text(path, format_signal(signal))
    logger.info("wrote %d samples to %s", len(signal), path)
    return path


def _parse_header(lines: Iterable[str]) -> Dict[str, str]:
    header = {}
    for line in lines:
        body = line.lstrip('#').strip()
        if ':' in body:
            key, value = body.split(':', 1)
            header[key.strip()] = value.strip()
    return header


def parse_numeric_lines(path: PathLike, as_int: bool = False) -> Tuple[List[str], np.ndarray]:
    """
    Parse a one-value-per-line file, skipping blank lines and '#' comments.

    Args:
        path: file to read
        as_int: require integer tokens (TRNG files)

    Returns:
        (comment lines, values array)

    Raises:
        FileParseError: with the 1-based line number of the first bad token
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"signal file not found: {path}")

    comments: List[str] = []
    values: List[float] = []
    with open(path, 'r', encoding='utf-8') as handle:
        for lineno, raw in enumerate(handle, start=1):
            token = raw.strip()
            if not token:
                continue
            if token.startswith('#'):
                comments.append(token)
                continue
            try:
                values.append(int(token) if as_int else float(token))
            except ValueError:
                kind = 'integer' if as_int else 'number'
                raise FileParseError(str(path), lineno, f"expected a {kind}, got {token!r}") from None

    return comments, np.asarray(values, dtype=np.float64)


def read_signal_file(path: PathLike, domain: Optional[str] = None) -> Signal:
    """
    Load a signal text file written by write_signal_file (or any plain column of numbers).

    Args:
        path: file to read
        domain: override the domain recorded in the header

    Returns:
        Signal with header entries copied into meta
    """
    comments, values = parse_numeric_lines(path)
    if values.size < 2:
        raise InsufficientSamples(f"{path}: need at least 2 samples, found {values.size}")

    header = _parse_header(comments)
    tag = Domain(domain or header.pop('domain', Domain.ANALOG.value))
    levels = header.pop('levels', None)
    meta = dict(header)
    meta['source_file'] = str(path)
    return Signal(values, domain=tag, levels=int(levels) if levels else None, meta=meta)
