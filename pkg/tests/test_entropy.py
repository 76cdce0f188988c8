"""
Tests for Approximate Entropy and Fuzzy Entropy
================================================

Usage:
    python -m pytest tests/test_entropy.py
    python tests/test_entropy.py
"""

import math
import sys
from pathlib import Path

import numpy as np
import pytest

# Add parent to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

from modules.generators.sources import GeneratorSpec, generate
from modules.generators.transforms import binarize
from modules.metrics.entropy import MEMBERSHIP_FUNCTIONS, EntropyParams, apen, apen_floor, fuzen, membership
from modules.metrics.nist import wraparound_apen
from modules.metrics.tsallis import disentropy_score
from modules.shared.errors import ConfigError, TooShort, UndefinedEntropy, ZeroVariance
from modules.shared.signal import Domain, Signal
from tests.oracles import naive_apen, naive_fuzen


def _mt(seed, n):
    return generate(GeneratorSpec.mt(seed, n=n))


def _oracle_cases(count=50):
    """Seeded MT signals with lengths spread over 20..200"""
    for seed in range(count):
        yield _mt(100 + seed, 20 + (seed * 37) % 181)


def test_apen_matches_naive_oracle():
    """Vectorised ApEn equals the double loop"""
    print("\n" + "=" * 60)
    print("TEST: ApEn vs naive loop")
    print("=" * 60)

    for sig in _oracle_cases():
        for m in (1, 2, 3):
            fast = apen(sig, EntropyParams.for_apen(m))
            slow = naive_apen(sig.samples, m)
            assert math.isclose(fast, slow, abs_tol=1e-12), f"N={len(sig)} m={m}: {fast} vs {slow}"
    print("  ✓ 50 signals, m = 1..3")


def test_fuzen_matches_naive_oracle():
    for sig in _oracle_cases():
        for m in (1, 2):
            fast = fuzen(sig, EntropyParams.for_fuzen(m))
            assert math.isclose(fast, naive_fuzen(sig.samples, m), abs_tol=1e-10), f"N={len(sig)} m={m}"


def test_scale_and_shift_invariance():
    """D, ApEn and FuzEn ignore a -> a*s + b"""
    for seed in range(20):
        sig = _mt(200 + seed, 300)
        ref = (disentropy_score(sig), apen(sig), fuzen(sig))
        for a in (-2.0, 0.5, 3.0):
            for b in (-1.0, 0.0, 7.0):
                moved = Signal(a * sig.samples + b)
                got = (disentropy_score(moved), apen(moved), fuzen(moved))
                for name, x, y in zip(('D', 'ApEn', 'FuzEn'), ref, got):
                    assert math.isclose(x, y, abs_tol=1e-9), f"{name} seed={seed} a={a} b={b}"


def test_ramp_apen_stays_above_floor():
    """A full ramp sits at zero ApEn; the end templates can push it just below"""
    ramp = Signal(np.linspace(0.0, 1.0, 2000))
    value = apen(ramp)
    print(f"  ramp ApEn={value:.3e}  floor={apen_floor(2000, 2):.3e}")
    assert apen_floor(2000, 2) <= value < 1e-2
    assert math.isclose(apen_floor(10000, 2), -math.log(9999) / 9999 - math.log1p(1 / 9998))
    assert -1.1e-3 < apen_floor(10000, 2) < -1e-3


def test_short_binary_apen_can_exceed_ln2():
    """Without wrap-around the pair and single-symbol windows differ by one sample"""
    bits = Signal([0, 0, 1, 1, 0], domain=Domain.BINARY)
    value = apen(bits, EntropyParams.for_apen(1))
    expected = (0.6 * math.log(0.6) + 0.4 * math.log(0.4)) - math.log(0.25)
    assert math.isclose(value, expected, abs_tol=1e-12)
    assert value > math.log(2)
    assert wraparound_apen(bits.samples, 1) < math.log(2)


def test_binary_signals_sit_near_ln2():
    """Random bits give ApEn and FuzEn close to ln 2"""
    bits = binarize(_mt(0, 2000))
    for m in (1, 2):
        a = apen(bits, EntropyParams.for_apen(m))
        f = fuzen(bits, EntropyParams.for_fuzen(m))
        print(f"  m={m}: ApEn={a:.4f}  FuzEn={f:.4f}  (ln2={math.log(2):.4f})")
        assert 0.68 < a < 0.70
        assert 0.68 < f < 0.70


def test_periodic_generator_scores_lower():
    good = generate(GeneratorSpec.from_preset('mt0', n=3000))
    bad = generate(GeneratorSpec.from_preset('lcg-bad', n=3000))
    # the 17x lattice of LCG Bad only shows once templates span three samples
    assert apen(bad, EntropyParams.for_apen(3)) < 0.5 * apen(good, EntropyParams.for_apen(3))
    assert fuzen(bad, EntropyParams.for_fuzen(3)) < 0.5 * fuzen(good, EntropyParams.for_fuzen(3))


def test_membership_functions():
    """Every membership is 1 at d = 0 and non-increasing"""
    d = np.linspace(0.0, 3.0, 301)
    r = 0.5
    for name in MEMBERSHIP_FUNCTIONS:
        values = membership(name, d, r)
        assert values[0] == 1.0, name
        assert np.all(np.diff(values) <= 1e-15), name
        assert np.all((values >= 0.0) & (values <= 1.0)), name

    assert membership('triangular', [0.5, 1.0], r).tolist() == [0.0, 0.0]
    assert membership('trapezoidal', [0.5, 1.0], r).tolist() == [1.0, 0.0]
    np.testing.assert_allclose(membership('z_shaped', [0.5, 0.75, 1.0], r), [1.0, 0.5, 0.0])
    np.testing.assert_allclose(membership('constant_gaussian', [0.5, 1.0], r), [1.0, 0.5])
    np.testing.assert_allclose(membership('bell_shaped', [0.5], r), [0.5])
    np.testing.assert_allclose(membership('gaussian', [0.5], r), [math.exp(-0.5)])

    with pytest.raises(ConfigError):
        membership('cosine', d, r)
    print("  ✓ membership functions")


def test_other_memberships_run():
    sig = _mt(4, 300)
    for name in MEMBERSHIP_FUNCTIONS:
        value = fuzen(sig, EntropyParams.for_fuzen(2, r_factor=0.3, membership=name))
        assert np.isfinite(value), name


def test_parameter_validation():
    with pytest.raises(ConfigError):
        EntropyParams(m=0)
    with pytest.raises(ConfigError):
        EntropyParams(r_factor=0.0)
    with pytest.raises(ConfigError):
        EntropyParams(membership='nope')
    assert EntropyParams.for_fuzen(3).to_dict()['r_factor'] == 0.1253


def test_degenerate_inputs():
    with pytest.raises(TooShort):
        apen(Signal([0.1, 0.5, 0.9]), EntropyParams.for_apen(2))
    with pytest.raises(ZeroVariance):
        fuzen(Signal([0.5] * 50))
    with pytest.raises(UndefinedEntropy):
        fuzen(_mt(5, 50), EntropyParams.for_fuzen(2, r_factor=1e-9, membership='triangular'))


def run_all_tests():
    print("\n" + "=" * 60)
    print("  ENTROPY TEST SUITE")
    print("=" * 60)

    tests = [
        test_apen_matches_naive_oracle,
        test_fuzen_matches_naive_oracle,
        test_scale_and_shift_invariance,
        test_ramp_apen_stays_above_floor,
        test_short_binary_apen_can_exceed_ln2,
        test_binary_signals_sit_near_ln2,
        test_periodic_generator_scores_lower,
        test_membership_functions,
        test_other_memberships_run,
        test_parameter_validation,
        test_degenerate_inputs,
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
