"""
Tests for signal sources, transforms and the PUF simulator
==========================================================

Usage:
    python -m pytest tests/test_generators.py
    python tests/test_generators.py
"""

import sys
from pathlib import Path

import numpy as np
import pytest

# Add parent to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

from modules.generators.lcg import LCG_PRESETS, LcgParams, get_lcg_preset, lcg_period, lcg_sequence
from modules.generators.puf import PufConfig, instance_block, instance_concatenation, puf_responses
from modules.generators.sources import (
    GeneratorSpec, generate, mt19937_doubles, mt19937_words, preset_names, words_to_doubles,
)
from modules.generators.transforms import LineInjection, binarize, concatenate, inject_line, quantize_levels
from modules.shared.errors import (
    ConfigError, EmptyList, LevelOutOfRange, MixedDomain, UnknownPreset,
)
from modules.shared.signal import Domain, Signal


# ---- LCG

def test_lcg_first_outputs():
    """Known first outputs of the classic LCGs from x0 = 1"""
    print("\n" + "=" * 60)
    print("TEST: LCG presets")
    print("=" * 60)

    assert lcg_sequence(get_lcg_preset('msg'), 2).tolist() == [16807, 282475249]
    assert lcg_sequence(get_lcg_preset('cpp11'), 1).tolist() == [48271]
    assert lcg_sequence(get_lcg_preset('gnu-c'), 1).tolist() == [1103527590]
    assert lcg_sequence(get_lcg_preset('lcg-bad'), 2).tolist() == [273, 4897]

    for name, (display, params) in LCG_PRESETS.items():
        assert params.seed == 1
        print(f"  {display:<20} M={params.modulus} a={params.multiplier} c={params.increment}")


def test_lcg_period():
    assert lcg_period(LcgParams(16, 5, 3, 1)) == 16
    assert lcg_period(get_lcg_preset('lcg-bad')) == 500
    assert lcg_period(get_lcg_preset('msg'), max_steps=1000) is None

    period = 500
    seq = lcg_sequence(get_lcg_preset('lcg-bad'), 3 * period)
    assert np.array_equal(seq[:period], seq[period:2 * period])


def test_lcg_validation():
    with pytest.raises(ConfigError):
        LcgParams(100, 100, 1)
    with pytest.raises(ConfigError):
        LcgParams(1, 0, 0, 0)
    with pytest.raises(UnknownPreset):
        get_lcg_preset('randu')


def test_lcg_normalization():
    sig = generate(GeneratorSpec.from_preset('lcg-bad', n=5))
    assert sig.samples[0] == 273 / 4999
    assert sig.meta['preset'] == 'lcg-bad'
    assert sig.meta['M'] == 5000

    seeded = generate(GeneratorSpec.from_preset('lcg-bad', n=3, seed=2))
    assert seeded.samples[0] == (17 * 2 + 256) / 4999

    raw = generate(GeneratorSpec('lcg', n=4, lcg=get_lcg_preset('msg'), normalize='none'))
    assert raw.samples[0] == 16807.0


# ---- MT19937

def test_mt19937_reference_values():
    """Reference outputs of init_genrand"""
    assert int(mt19937_words(5489, 1)[0]) == 3499211612
    assert mt19937_doubles(0, 1)[0] == 0.5488135039273248

    words = mt19937_words(123, 20)
    np.testing.assert_array_equal(words_to_doubles(words), mt19937_doubles(123, 10))

    mt0 = generate(GeneratorSpec.from_preset('mt0', n=100))
    assert np.array_equal(mt0.samples, mt19937_doubles(0, 100))
    mts = generate(GeneratorSpec.from_preset('mts', n=10))
    assert mts.meta['seed'] == 1773456103


def test_presets_and_spec_validation():
    names = preset_names()
    assert {'mt0', 'mts', 'msg', 'cpp11', 'gnu-c', 'lcg-bad', 'lcg1', 'lcg4'} <= set(names)
    with pytest.raises(UnknownPreset) as excinfo:
        GeneratorSpec.from_preset('xorshift')
    assert 'lcg-bad' in str(excinfo.value)
    with pytest.raises(ConfigError):
        GeneratorSpec('mt19937', seed=2 ** 32)
    with pytest.raises(ConfigError):
        GeneratorSpec('lcg', n=10)
    with pytest.raises(ConfigError):
        GeneratorSpec('mt19937', n=1)


# ---- Transforms

def test_binarize_threshold():
    sig = Signal([0.1, 0.5, 0.49999, 0.9])
    bits = binarize(sig)
    assert bits.domain is Domain.BINARY
    assert bits.samples.tolist() == [0.0, 1.0, 0.0, 1.0]


def test_quantize_levels():
    sig = Signal([0.0, 0.24, 0.26, 0.5, 0.999, 1.0])
    q = quantize_levels(sig, 3)
    assert q.domain is Domain.MULTILEVEL and q.levels == 3
    assert q.samples.tolist() == [0.0, 0.0, 0.5, 0.5, 1.0, 1.0]

    # ties go to the upper level
    assert quantize_levels(Signal([0.25, 0.75]), 3).samples.tolist() == [0.5, 1.0]

    noisy_a = quantize_levels(sig, 5, noise_sigma=0.05, noise_seed=4)
    noisy_b = quantize_levels(sig, 5, noise_sigma=0.05, noise_seed=4)
    assert np.array_equal(noisy_a.samples, noisy_b.samples)
    assert not np.array_equal(noisy_a.samples, quantize_levels(sig, 5).samples)

    for bad in (1, 11):
        with pytest.raises(LevelOutOfRange):
            quantize_levels(sig, bad)
    with pytest.raises(ConfigError):
        quantize_levels(sig, 4, noise_sigma=0.2)


def test_line_injection():
    sig = generate(GeneratorSpec.mt(1, n=16))
    lined = inject_line(sig, LineInjection(period=4))
    np.testing.assert_allclose(lined.samples[[0, 4, 8, 12]], [0.0, 1 / 3, 2 / 3, 1.0])
    untouched = np.setdiff1d(np.arange(16), [0, 4, 8, 12])
    assert np.array_equal(lined.samples[untouched], sig.samples[untouched])
    assert lined.meta['line_period'] == 4

    wrapped = LineInjection(period=2, offset=0.5, slope=0.3).values(4)
    np.testing.assert_allclose(wrapped, [0.5, 0.8, 0.1, 0.4], atol=1e-12)

    with pytest.raises(ConfigError):
        LineInjection(period=0)
    with pytest.raises(ConfigError):
        inject_line(sig, LineInjection(period=3, start=20))


def test_concatenate():
    a = Signal([0.1, 0.2], meta={'response_id': 0})
    b = Signal([0.3, 0.4], meta={'response_id': 1})
    joined = concatenate([a, b])
    assert joined.samples.tolist() == [0.1, 0.2, 0.3, 0.4]
    assert joined.meta['concatenated_from'] == 2
    assert joined.meta['sources'] == [0, 1]
    assert concatenate([a]) is a

    with pytest.raises(EmptyList):
        concatenate([])
    with pytest.raises(MixedDomain):
        concatenate([a, binarize(b)])


# ---- PUF

def test_puf_dynamics_rule():
    """A draw >= 0.9 forces the next sample to 0.1, a draw <= 0.1 forces 0.9"""
    cfg = PufConfig(response_len=64, n_responses=5, n_instances=2, defect='dynamics', seed=3)
    base = mt19937_doubles(cfg.seed + 1, 5 * 64).reshape(5, 64)
    block = instance_block(cfg, 1)

    assert np.array_equal(block[:, 0], base[:, 0])
    for row_base, row in zip(base, block):
        for k in range(1, 64):
            if row_base[k - 1] >= 0.9:
                assert row[k] == 0.1
            elif row_base[k - 1] <= 0.1:
                assert row[k] == 0.9
            else:
                assert row[k] == row_base[k]


def test_puf_cascade_locks_alternation():
    cfg = PufConfig(response_len=128, n_responses=4, n_instances=1, defect='dynamics', cascade=True)
    block = instance_block(cfg, 0)
    for row in block:
        hits = np.flatnonzero((row[:-1] >= 0.9) | (row[:-1] <= 0.1))
        if hits.size:
            tail = row[hits[0] + 1:]
            assert set(np.round(tail, 12)) <= {0.1, 0.9}


def test_puf_fixed_defects_and_reference():
    ref = PufConfig(response_len=32, n_responses=3, n_instances=2, seed=10)
    assert np.array_equal(instance_block(ref, 1).reshape(-1), mt19937_doubles(11, 96))

    prefix = instance_block(PufConfig(response_len=32, n_responses=3, defect='fixed_prefix', seed=10), 0)
    assert np.all(prefix[:, 0] == 0.2) and np.all(prefix[:, 1] == 0.1)

    sample = instance_block(PufConfig(response_len=32, n_responses=3, defect='fixed_sample',
                                      sample_index=5, sample_value=0.5), 0)
    assert np.all(sample[:, 5] == 0.5)

    with pytest.raises(ConfigError):
        PufConfig(defect='aging')
    with pytest.raises(ConfigError):
        PufConfig(response_len=8, sample_index=8)


def test_puf_fleet_shapes():
    cfg = PufConfig(response_len=16, n_responses=4, n_instances=3)
    fleet = puf_responses(cfg)
    assert len(fleet) == 3
    assert all(len(responses) == 4 for responses in fleet)
    assert all(len(r) == 16 for r in fleet[2])
    assert fleet[1][2].meta['response_id'] == 2

    joined = instance_concatenation(cfg, 1)
    assert len(joined) == 64
    assert np.array_equal(joined.samples, concatenate(fleet[1]).samples)


def run_all_tests():
    print("\n" + "=" * 60)
    print("  GENERATOR TEST SUITE")
    print("=" * 60)

    tests = [
        test_lcg_first_outputs,
        test_lcg_period,
        test_lcg_validation,
        test_lcg_normalization,
        test_mt19937_reference_values,
        test_presets_and_spec_validation,
        test_binarize_threshold,
        test_quantize_levels,
        test_line_injection,
        test_concatenate,
        test_puf_dynamics_rule,
        test_puf_cascade_locks_alternation,
        test_puf_fixed_defects_and_reference,
        test_puf_fleet_shapes,
    ]

    passed = 0
    failed = 0
    for test in tests:
        try:
            test()
            passed += 1
        except Exception as e:
            print(f"\n  [FAIL] {test.__name__}: {e}")
            failed += 1

    print("\n" + "=" * 60)
    print(f"  RESULTS: {passed} passed, {failed} failed")
    print("=" * 60)
    return failed == 0


if __name__ == '__main__':
    success = run_all_tests()
    sys.exit(0 if success else 1)
