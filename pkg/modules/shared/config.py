"""
Configuration
=============
Module-level constants and environment-driven settings.

Environment variables:
    COMPLEXITY_OUTPUT_DIR   default output directory for CLI results ("results")
    COMPLEXITY_FULL_FLEET   "1" runs PUF studies with 100 instances instead of 20
    COMPLEXITY_WORKERS      process count for experiment grids (default 1)
"""

import hashlib
import json
import logging
import os
import sys
from typing import Any

logger = logging.getLogger(__name__)

TOOL_VERSION = '1.0.0'
SCHEMA_VERSION = 1

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

# Kernel defaults
DEFAULT_APEN_R = 0.2
DEFAULT_FUZEN_R = 0.1253
DEFAULT_MEMBERSHIP = 'gaussian'
SINGULARITY_EPS = 1e-9
FFT_THRESHOLD = 1024
NIST_ALPHA = 0.01

# Experiment defaults
DEFAULT_N = 10000
DETECTION_SIGMA = 5.0
FULL_FLEET_INSTANCES = 100
REDUCED_FLEET_INSTANCES = 20


def get_output_dir() -> str:
    return os.getenv('COMPLEXITY_OUTPUT_DIR', 'results')


def full_fleet_enabled() -> bool:
    return os.getenv('COMPLEXITY_FULL_FLEET', '0').strip().lower() in ('1', 'true', 'yes')


def default_fleet_size() -> int:
    return FULL_FLEET_INSTANCES if full_fleet_enabled() else REDUCED_FLEET_INSTANCES


def default_workers() -> int:
    raw = os.getenv('COMPLEXITY_WORKERS', '1')
    try:
        return max(1, int(raw))
    except ValueError:
        logger.warning("COMPLEXITY_WORKERS=%r is not an integer, using 1", raw)
        return 1


def setup_logging(verbosity: int = 0) -> None:
    """Configure the root logger once; 0 -> WARNING, 1 -> INFO, 2+ -> DEBUG."""
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


def spec_hash(payload: Any) -> str:
    """Stable short hash of a JSON-serialisable parameter set."""
    text = json.dumps(payload, sort_keys=True, default=str, separators=(',', ':'))
    return hashlib.sha256(text.encode('utf-8')).hexdigest()[:16]
