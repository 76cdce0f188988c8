"""
Metric report
=============
One-call analysis of a signal: disentropy score, ApEn and FuzEn for every
requested m, and NIST p-values for binary signals. Failures are caught per
metric and labelled, the remaining metrics still run.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence

from modules.metrics.autocorrelation import autocorrelation
from modules.metrics.entropy import EntropyParams, apen, fuzen
from modules.metrics.nist import apen_nist_pvalue
from modules.metrics.tsallis import IDEAL_D2, disentropy
from modules.shared.config import (
    DEFAULT_APEN_R, DEFAULT_FUZEN_R, DEFAULT_MEMBERSHIP, SCHEMA_VERSION, TOOL_VERSION, spec_hash,
)
from modules.shared.errors import ComplexityError, ConfigError, EmptyList
from modules.shared.signal import Signal

logger = logging.getLogger(__name__)

ALL_METRICS = ('disentropy', 'apen', 'fuzen', 'pvalue')


@dataclass
class MetricReport:
    """
    Scores of one signal together with the parameters that produced them.

    Attributes:
        disentropy_d2: D2, None if it failed
        disentropy_score: |D2 - 0.5|, None if it failed
        apen / fuzen: m -> score
        apen_pvalue: m -> NIST p-value (binary signals only)
        params: every parameter used, for reproducibility
        signal_meta: provenance copied from the signal
        errors: metric label -> {'error': name, 'message': text}
    """

    disentropy_d2: Optional[float] = None
    disentropy_score: Optional[float] = None
    apen: Dict[int, float] = field(default_factory=dict)
    fuzen: Dict[int, float] = field(default_factory=dict)
    apen_pvalue: Optional[Dict[int, float]] = None
    params: dict = field(default_factory=dict)
    signal_meta: dict = field(default_factory=dict)
    errors: Dict[str, dict] = field(default_factory=dict)

    @property
    def n_succeeded(self) -> int:
        count = len(self.apen) + len(self.fuzen) + len(self.apen_pvalue or {})
        return count + (1 if self.disentropy_score is not None else 0)

    @property
    def all_failed(self) -> bool:
        return self.n_succeeded == 0

    def value(self, metric: str, m: Optional[int] = None) -> Optional[float]:
        """Look up a score by metric name ('disentropy', 'd2', 'apen', 'fuzen', 'pvalue')."""
        if metric == 'disentropy':
            return self.disentropy_score
        if metric == 'd2':
            return self.disentropy_d2
        table = {'apen': self.apen, 'fuzen': self.fuzen, 'pvalue': self.apen_pvalue or {}}.get(metric)
        if table is None:
            raise ConfigError(f"unknown metric '{metric}'")
        return table.get(m)

    def to_dict(self) -> dict:
        payload = {
            'schema': SCHEMA_VERSION,
            'tool_version': TOOL_VERSION,
            'spec_hash': spec_hash(self.params),
            'params': self.params,
            'signal_meta': self.signal_meta,
            'disentropy_d2': self.disentropy_d2,
            'disentropy_score': self.disentropy_score,
            'apen': {str(m): v for m, v in sorted(self.apen.items())},
            'fuzen': {str(m): v for m, v in sorted(self.fuzen.items())},
            'errors': self.errors,
        }
        if self.apen_pvalue is not None:
            payload['apen_pvalue'] = {str(m): v for m, v in sorted(self.apen_pvalue.items())}
        return payload

    def to_rows(self) -> List[dict]:
        """Flat (metric, m, value) rows for CSV output."""
        rows = []
        if self.disentropy_score is not None:
            rows.append({'metric': 'disentropy_d2', 'm': '', 'value': self.disentropy_d2})
            rows.append({'metric': 'disentropy_score', 'm': '', 'value': self.disentropy_score})
        for name, table in (('apen', self.apen), ('fuzen', self.fuzen), ('apen_pvalue', self.apen_pvalue or {})):
            for m, v in sorted(table.items()):
                rows.append({'metric': name, 'm': m, 'value': v})
        for label, err in sorted(self.errors.items()):
            rows.append({'metric': label, 'm': '', 'value': f"error: {err['error']}"})
        return rows


def _record_failure(report: MetricReport, label: str, exc: ComplexityError) -> None:
    report.errors[label] = exc.to_dict()
    logger.warning("%s failed: %s", label, exc)


def analyze(signal: Signal, m_list: Sequence[int], metrics: Iterable[str] = ALL_METRICS,
            apen_r: float = DEFAULT_APEN_R, fuzen_r: float = DEFAULT_FUZEN_R,
            membership: str = DEFAULT_MEMBERSHIP, power: float = 2.0,
            baseline_removal: bool = False, autocorr_method: str = 'auto') -> MetricReport:
    """
    Compute every requested metric for a signal.

    Args:
        signal: Signal to analyse
        m_list: embedding dimensions for ApEn / FuzEn / p-values
        metrics: subset of ('disentropy', 'apen', 'fuzen', 'pvalue')
        apen_r, fuzen_r: tolerance factors
        membership, power, baseline_removal: FuzEn options
        autocorr_method: 'auto', 'fft' or 'direct'

    Returns:
        MetricReport; per-metric failures are recorded in report.errors

    Raises:
        EmptyList: if m_list is empty
    """
    m_values = sorted({int(m) for m in m_list})
    if not m_values:
        raise EmptyList("m_list must contain at least one embedding dimension")
    wanted = set(metrics)
    unknown = wanted - set(ALL_METRICS)
    if unknown:
        raise ConfigError(f"unknown metrics {sorted(unknown)}, expected a subset of {ALL_METRICS}")

    apen_params = {m: EntropyParams.for_apen(m, apen_r) for m in m_values}
    fuzen_params = {
        m: EntropyParams.for_fuzen(m, fuzen_r, membership, power, baseline_removal) for m in m_values
    }

    report = MetricReport(
        params={
            'm_list': m_values,
            'metrics': sorted(wanted),
            'apen': {'r_factor': apen_r, 'sigma': 'std(ddof=1)', 'self_matches': True},
            'fuzen': {
                'r_factor': fuzen_r, 'membership': membership, 'power': power,
                'baseline_removal': baseline_removal, 'normalization': 'z-score',
            },
            'autocorrelation': {'estimator': 'biased', 'method': autocorr_method},
            'domain': signal.domain.value,
            'n_samples': len(signal),
        },
        signal_meta=dict(signal.meta),
    )

    if 'disentropy' in wanted:
        try:
            d2 = disentropy(autocorrelation(signal, method=autocorr_method))
            report.disentropy_d2 = d2
            report.disentropy_score = abs(d2 - IDEAL_D2)
        except ComplexityError as e:
            _record_failure(report, 'disentropy', e)

    for m in m_values:
        if 'apen' in wanted:
            try:
                report.apen[m] = apen(signal, apen_params[m])
            except ComplexityError as e:
                _record_failure(report, f"apen[m={m}]", e)
        if 'fuzen' in wanted:
            try:
                report.fuzen[m] = fuzen(signal, fuzen_params[m])
            except ComplexityError as e:
                _record_failure(report, f"fuzen[m={m}]", e)

    if 'pvalue' in wanted and signal.is_binary:
        report.apen_pvalue = {}
        for m in m_values:
            try:
                report.apen_pvalue[m] = apen_nist_pvalue(signal, m)
            except ComplexityError as e:
                _record_failure(report, f"apen_pvalue[m={m}]", e)

    return report
