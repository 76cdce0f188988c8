"""
Reproduction studies: convergence, PRNG comparison, D vs N, m sweep,
multi-level, line scan, PUF defects and TRNG comparison.
"""

from modules.experiments.registry import DESCRIPTIONS, EXPERIMENTS, get_experiment
from modules.experiments.runner import ExperimentResult, relative_difference, run_cells

__all__ = ['DESCRIPTIONS', 'EXPERIMENTS', 'get_experiment', 'ExperimentResult', 'relative_difference', 'run_cells']
