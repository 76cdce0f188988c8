"""
Experiment registry: CLI names -> study functions.
"""

from functools import partial
from typing import Callable, Dict

from modules.experiments.runner import ExperimentResult
from modules.experiments.studies import (
    run_convergence, run_disentropy_vs_n, run_line_scan, run_m_sweep, run_multilevel, run_prng_compare,
    run_puf_dynamics, run_puf_fixed_prefix, run_puf_per_response, run_trng_compare,
)
from modules.shared.errors import UnknownExperiment

EXPERIMENTS: Dict[str, Callable[..., ExperimentResult]] = {
    'convergence': run_convergence,
    'prng-analog': partial(run_prng_compare, 'analog'),
    'prng-binary': partial(run_prng_compare, 'binary'),
    'd-vs-n': run_disentropy_vs_n,
    'm-sweep': run_m_sweep,
    'multilevel': run_multilevel,
    'line-scan': run_line_scan,
    'puf-dynamics': run_puf_dynamics,
    'puf-per-response': run_puf_per_response,
    'puf-prefix': run_puf_fixed_prefix,
    'puf-sample': partial(run_puf_fixed_prefix, defect='fixed_sample', values=(), sample_value=0.5),
    'trng': run_trng_compare,
}

DESCRIPTIONS = {
    'convergence': 'ApEn / FuzEn / D on growing prefixes of MT0',
    'prng-analog': 'score ratios of every preset against MT0, analog outputs',
    'prng-binary': 'score ratios and NIST p-values, comparator at 0.5',
    'd-vs-n': 'D(N) of LCG Bad with linear fit above the period',
    'm-sweep': 'ApEn / FuzEn for m = 1..8, MT0 vs LCG Bad',
    'multilevel': 'quantized MT0 over levels and Gaussian level noise',
    'line-scan': 'detectability of a periodic diagonal line',
    'puf-dynamics': 'PUF dynamics defect, concatenated responses',
    'puf-per-response': 'PUF dynamics defect, response by response',
    'puf-prefix': 'PUF fixed [0.2, 0.1] prefix for 100/200/500 responses',
    'puf-sample': 'PUF fixed single sample 0.5',
    'trng': 'TRNG sample sets against MT0 (needs --files)',
}


def get_experiment(name: str) -> Callable[..., ExperimentResult]:
    try:
        return EXPERIMENTS[name]
    except KeyError:
        raise UnknownExperiment(name, EXPERIMENTS) from None
