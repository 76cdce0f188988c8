"""
Metric kernels: autocorrelation, disentropy, ApEn, FuzEn, NIST ApEn p-value.
"""

from modules.metrics.autocorrelation import AutocorrSeries, autocorrelation
from modules.metrics.entropy import EntropyParams, apen, fuzen, membership
from modules.metrics.nist import apen_nist_pvalue, embedding_bound, nist_apen_statistic
from modules.metrics.report import MetricReport, analyze
from modules.metrics.tsallis import disentropy, disentropy_score, q_exp, q_log, w2

__all__ = [
    'AutocorrSeries', 'autocorrelation', 'EntropyParams', 'apen', 'fuzen', 'membership',
    'apen_nist_pvalue', 'embedding_bound', 'nist_apen_statistic', 'MetricReport', 'analyze',
    'disentropy', 'disentropy_score', 'q_exp', 'q_log', 'w2',
]
