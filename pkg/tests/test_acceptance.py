"""
Published reference values
==========================
Full-length (N = 10000) checks against the reference tables for the
deterministic generators. Slower than the unit suites.

Usage:
    python -m pytest tests/test_acceptance.py
    python tests/test_acceptance.py
"""

import sys
from pathlib import Path

import pytest

# Add parent to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

from modules.experiments.studies import (
    GOOD_PRNGS, run_disentropy_vs_n, run_line_scan, run_multilevel, run_prng_compare, run_puf_dynamics,
    run_puf_per_response,
)
from modules.generators.sources import GeneratorSpec, generate
from modules.generators.transforms import binarize
from modules.metrics.entropy import EntropyParams, apen, fuzen
from modules.metrics.nist import apen_nist_pvalue
from modules.metrics.tsallis import disentropy_score


def _analog(preset, n=10000):
    return generate(GeneratorSpec.from_preset(preset, n=n))


def _binary(preset, n=10000):
    return binarize(_analog(preset, n))


def test_lcg_bad_analog_table():
    print("\n" + "=" * 60)
    print("TEST: LCG Bad, analog, N=10000")
    print("=" * 60)

    sig = _analog('lcg-bad')
    d = disentropy_score(sig)
    values = {
        'apen_m2': apen(sig, EntropyParams.for_apen(2)),
        'apen_m3': apen(sig, EntropyParams.for_apen(3)),
        'fuzen_m2': fuzen(sig, EntropyParams.for_fuzen(2)),
        'fuzen_m3': fuzen(sig, EntropyParams.for_fuzen(3)),
    }
    print(f"  D={d:.4f}  " + "  ".join(f"{k}={v:.4f}" for k, v in values.items()))

    assert d == pytest.approx(2.51, abs=0.05)
    assert values['apen_m2'] == pytest.approx(1.939, abs=0.02)
    assert values['apen_m3'] == pytest.approx(0.0, abs=1e-3)
    assert values['fuzen_m2'] == pytest.approx(1.241, abs=0.05)
    assert values['fuzen_m3'] == pytest.approx(0.398, abs=0.05)


def test_lcg_bad_binary_table():
    bits = _binary('lcg-bad')
    assert disentropy_score(bits) == pytest.approx(2.60, abs=0.05)
    assert apen(bits, EntropyParams.for_apen(8)) == pytest.approx(0.367, abs=0.02)
    assert fuzen(bits, EntropyParams.for_fuzen(8)) == pytest.approx(0.381, abs=0.05)


def test_mt0_analog_table():
    sig = _analog('mt0')
    assert disentropy_score(sig) < 1e-3
    assert apen(sig, EntropyParams.for_apen(2)) == pytest.approx(2.156, abs=0.02)
    assert apen(sig, EntropyParams.for_apen(3)) == pytest.approx(1.848, abs=0.02)
    assert fuzen(sig, EntropyParams.for_fuzen(2)) == pytest.approx(2.040, abs=0.02)
    assert fuzen(sig, EntropyParams.for_fuzen(3)) == pytest.approx(1.926, abs=0.02)


def test_mt0_binary_near_ln2():
    value = apen(_binary('mt0'), EntropyParams.for_apen(2))
    assert value == pytest.approx(0.6930, abs=0.005)


def test_disentropy_separates_weak_lcgs():
    """D of LCG 1/3/4 (analog) and LCG 2 (binary) is at least 10x every good generator"""
    good_analog = max(disentropy_score(_analog(p)) for p in GOOD_PRNGS)
    for weak in ('lcg1', 'lcg3', 'lcg4'):
        d = disentropy_score(_analog(weak))
        print(f"  {weak}: D={d:.3e}  ({d / good_analog:.0f}x)")
        assert d >= 10 * good_analog

    good_binary = max(disentropy_score(_binary(p)) for p in GOOD_PRNGS)
    assert disentropy_score(_binary('lcg2')) >= 10 * good_binary


def test_disentropy_linear_in_n():
    result = run_disentropy_vs_n(workers=1)
    assert result.checks['r_squared'] > 0.99
    assert result.checks['slope_positive'] is True
    assert result.checks['below_period_under_fit'] is True


def test_nist_pvalues():
    lcg_bad = _binary('lcg-bad')
    for m in (2, 3, 8):
        assert apen_nist_pvalue(lcg_bad, m) < 0.01

    for preset in GOOD_PRNGS:
        bits = _binary(preset)
        for m in (2, 3):
            assert apen_nist_pvalue(bits, m) > 0.01, f"{preset} m={m}"

    p = apen_nist_pvalue(_binary('lcg1'), 8)
    print(f"  LCG 1, m=8: p={p:.4f}")
    assert 0.001 <= p <= 0.05


def test_entropy_does_not_separate_weak_lcgs():
    """ApEn and FuzEn stay within 10x of the good generators where D does not"""
    analog = run_prng_compare('analog', presets=('mt0',) + GOOD_PRNGS + ('lcg1', 'lcg3', 'lcg4'), workers=1)
    for weak in ('lcg1', 'lcg3', 'lcg4'):
        assert analog.checks[f"disentropy_separates_{weak}"] is True, weak
        assert analog.checks[f"entropy_separates_{weak}"] is False, weak

    binary = run_prng_compare('binary', presets=('mt0',) + GOOD_PRNGS + ('lcg2', 'lcg3', 'lcg4'), workers=1)
    assert binary.checks['disentropy_separates_lcg2'] is True
    for weak in ('lcg2', 'lcg3', 'lcg4'):
        assert binary.checks[f"entropy_separates_{weak}"] is False, weak


def test_line_scan_disentropy_boundary():
    result = run_line_scan(p_line_grid=(40, 64), m_list=(2,), metrics=('d2',), workers=1)
    assert result.checks['disentropy_detects_p40'] is True
    assert result.checks['disentropy_detects_p64'] is False


def test_line_scan_entropy_sees_only_short_periods():
    """ApEn and FuzEn notice the line iff p_line <= m"""
    result = run_line_scan(p_line_grid=(1, 2, 3, 4, 5, 8), m_list=(2, 3, 4), metrics=('apen', 'fuzen'),
                           workers=1)
    assert len(result.summary) == 36
    assert result.checks['entropy_detects_iff_p_le_m'] is True


def test_multilevel_table():
    result = run_multilevel(levels_grid=(2, 10), sigma_grid=(0.0, 0.05, 0.1), m=3, workers=1)
    checks = result.checks
    print(f"  ApEn {checks['apen_levels2_sigma0']:.4f} -> {checks['apen_levels10_sigma0']:.4f}"
          f"  FuzEn(10)={checks['fuzen_levels10_sigma0']:.4f}  D max={checks['disentropy_max']:.2e}")
    assert checks['apen_levels2_sigma0'] == pytest.approx(0.693, abs=0.01)
    assert checks['apen_levels10_sigma0'] == pytest.approx(1.8, abs=0.05)
    assert checks['fuzen_levels10_sigma0'] == pytest.approx(1.9, abs=0.05)
    assert checks['disentropy_max'] < 1e-3


def test_puf_dynamics_table():
    d_only = run_puf_dynamics(n_instances=20, metrics=('disentropy',), workers=1)
    print(f"  concatenated D change: {d_only.checks['disentropy_increase_pct']:+.0f}%")
    assert d_only.checks['disentropy_increase_pct'] > 10000

    entropy = run_puf_dynamics(n_instances=5, m_list=(1, 2, 3), metrics=('apen', 'fuzen'), workers=1)
    print(entropy.summary[['metric', 'm', 'rel_diff_pct']].to_string(index=False))
    assert entropy.checks['entropy_decrease_in_5_35_pct'] is True


def test_puf_per_response_table():
    result = run_puf_per_response(n_instances=20, metrics=('disentropy',), workers=1)
    pct = result.checks['disentropy_increase_pct']
    print(f"  per-response D change: {pct:+.0f}%")
    assert 200 <= pct <= 500


def run_all_tests():
    tests = [
        test_lcg_bad_analog_table,
        test_lcg_bad_binary_table,
        test_mt0_analog_table,
        test_mt0_binary_near_ln2,
        test_disentropy_separates_weak_lcgs,
        test_disentropy_linear_in_n,
        test_nist_pvalues,
        test_entropy_does_not_separate_weak_lcgs,
        test_line_scan_disentropy_boundary,
        test_line_scan_entropy_sees_only_short_periods,
        test_multilevel_table,
        test_puf_dynamics_table,
        test_puf_per_response_table,
    ]
    failed = 0
    for test in tests:
        try:
            test()
            print(f"  [PASS] {test.__name__}")
        except Exception as e:
            print(f"  [FAIL] {test.__name__}: {e}")
            failed += 1
    print(f"\n  RESULTS: {len(tests) - failed} passed, {failed} failed")
    return failed == 0


if __name__ == '__main__':
    sys.exit(0 if run_all_tests() else 1)
