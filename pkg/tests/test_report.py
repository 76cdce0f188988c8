"""
Tests for the combined metric report
====================================

Usage:
    python -m pytest tests/test_report.py
"""

import json
import sys
from pathlib import Path

import pytest

# Add parent to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

from modules.generators.sources import GeneratorSpec, generate
from modules.generators.transforms import binarize
from modules.metrics.report import analyze
from modules.shared.errors import ConfigError, EmptyList
from modules.shared.signal import Signal


def test_analog_report():
    sig = generate(GeneratorSpec.from_preset('lcg-bad', n=2000))
    report = analyze(sig, [2, 3])

    assert report.disentropy_score == abs(report.disentropy_d2 - 0.5)
    assert sorted(report.apen) == [2, 3]
    assert sorted(report.fuzen) == [2, 3]
    assert report.apen_pvalue is None
    assert not report.errors
    assert report.value('apen', 3) == report.apen[3]
    assert report.params['fuzen']['r_factor'] == 0.1253
    assert report.signal_meta['preset'] == 'lcg-bad'

    payload = report.to_dict()
    json.dumps(payload, allow_nan=False)
    assert payload['apen'].keys() == {'2', '3'}
    assert len(payload['spec_hash']) == 16
    print(f"  D={report.disentropy_score:.4g}  ApEn(2)={report.apen[2]:.4f}  FuzEn(2)={report.fuzen[2]:.4f}")


def test_binary_report_has_pvalues():
    bits = binarize(generate(GeneratorSpec.from_preset('mt0', n=4096)))
    report = analyze(bits, [1, 2, 7])
    # bound for N = 4096 is 7
    assert sorted(report.apen_pvalue) == [1, 2, 7]
    rows = report.to_rows()
    assert {'disentropy_score', 'apen', 'fuzen', 'apen_pvalue'} <= {r['metric'] for r in rows}

    too_large = analyze(bits, [8], metrics=('pvalue',))
    assert 'apen_pvalue[m=8]' in too_large.errors
    assert too_large.errors['apen_pvalue[m=8]']['error'] == 'EmbeddingTooLarge'
    assert too_large.all_failed


def test_partial_failures_are_recorded():
    short = Signal([0.1, 0.9, 0.4, 0.6])
    report = analyze(short, [1, 3])
    assert report.disentropy_score is not None
    assert 1 in report.apen
    assert 'apen[m=3]' in report.errors and report.errors['apen[m=3]']['error'] == 'TooShort'
    assert not report.all_failed

    flat = analyze(Signal([0.5, 0.5, 0.5, 0.5, 0.5]), [1])
    assert flat.all_failed
    assert flat.errors['disentropy']['error'] == 'ZeroVariance'


def test_argument_errors():
    sig = generate(GeneratorSpec.mt(2, n=100))
    with pytest.raises(EmptyList):
        analyze(sig, [])
    with pytest.raises(ConfigError):
        analyze(sig, [2], metrics=('sampen',))
