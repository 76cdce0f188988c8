"""
Experiment runner
=================
An experiment is a grid of independent cells. Each cell rebuilds its signal
from a picklable recipe, evaluates a list of (metric, m) pairs and returns
flat rows. Cells can be spread over a process pool; rows are always merged
back in cell order so reruns give identical tables.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from multiprocessing import Pool
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from modules.generators.puf import PufConfig, instance_block, instance_concatenation
from modules.generators.sources import GeneratorSpec, generate
from modules.generators.transforms import LineInjection, binarize, inject_line, quantize_levels
from modules.metrics.autocorrelation import autocorrelation
from modules.metrics.entropy import EntropyParams, apen, fuzen
from modules.metrics.nist import apen_nist_pvalue
from modules.metrics.tsallis import IDEAL_D2, disentropy
from modules.shared.config import (
    DEFAULT_APEN_R, DEFAULT_FUZEN_R, DEFAULT_MEMBERSHIP, SCHEMA_VERSION, TOOL_VERSION, spec_hash,
)
from modules.shared.data_loader import atomic_write_text
from modules.shared.errors import ComplexityError, ConfigError
from modules.shared.signal import Signal

logger = logging.getLogger(__name__)

METRICS = ('disentropy', 'd2', 'apen', 'fuzen', 'pvalue')
# metrics without an embedding dimension are stored with m = 0
NO_M = 0


@dataclass(frozen=True)
class PufSource:
    """One PUF instance: its concatenation, or a single response when response is set."""

    cfg: PufConfig
    instance: int
    response: Optional[int] = None

    def build(self) -> Signal:
        if self.response is None:
            return instance_concatenation(self.cfg, self.instance)
        block = instance_block(self.cfg, self.instance)
        meta = {'generator': 'PUF', 'defect': self.cfg.defect, 'instance': self.instance,
                'response_id': self.response}
        return Signal(block[self.response], meta=meta)


@dataclass(frozen=True)
class SignalRecipe:
    """Generator or PUF source followed by optional transforms, in this order: line, quantize, binarize."""

    source: Union[GeneratorSpec, PufSource]
    line: Optional[LineInjection] = None
    levels: Optional[int] = None
    noise_sigma: float = 0.0
    noise_seed: int = 0
    binary: bool = False

    def build(self) -> Signal:
        if isinstance(self.source, PufSource):
            signal = self.source.build()
        else:
            signal = generate(self.source)
        if self.line is not None:
            signal = inject_line(signal, self.line)
        if self.levels is not None:
            signal = quantize_levels(signal, self.levels, self.noise_sigma, self.noise_seed)
        if self.binary:
            signal = binarize(signal)
        return signal


@dataclass(frozen=True)
class Cell:
    cell_id: str
    recipe: SignalRecipe
    metrics: Tuple[Tuple[str, int], ...]
    labels: Tuple[Tuple[str, object], ...] = ()
    options: Tuple[Tuple[str, object], ...] = ()


def make_cell(cell_id: str, recipe: SignalRecipe, metrics: Sequence[Tuple[str, int]],
              labels: Optional[dict] = None, options: Optional[dict] = None) -> Cell:
    return Cell(
        cell_id=cell_id,
        recipe=recipe,
        metrics=tuple((name, int(m)) for name, m in metrics),
        labels=tuple((labels or {}).items()),
        options=tuple(sorted((options or {}).items())),
    )


def metric_pairs(metrics: Sequence[str], m_list: Sequence[int]) -> List[Tuple[str, int]]:
    """Expand metric names into (metric, m) pairs; disentropy-type metrics get m = 0."""
    pairs = []
    for name in metrics:
        if name not in METRICS:
            raise ConfigError(f"unknown metric '{name}', expected one of {METRICS}")
        if name in ('disentropy', 'd2'):
            pairs.append((name, NO_M))
        else:
            pairs.extend((name, int(m)) for m in m_list)
    return pairs


def measure(signal: Signal, metric: str, m: int, options: Optional[dict] = None) -> float:
    """Single metric value for a signal."""
    options = options or {}
    if metric in ('disentropy', 'd2'):
        d2 = disentropy(autocorrelation(signal))
        return abs(d2 - IDEAL_D2) if metric == 'disentropy' else d2
    if metric == 'apen':
        return apen(signal, EntropyParams.for_apen(m, options.get('apen_r', DEFAULT_APEN_R)))
    if metric == 'fuzen':
        params = EntropyParams.for_fuzen(
            m,
            options.get('fuzen_r', DEFAULT_FUZEN_R),
            options.get('membership', DEFAULT_MEMBERSHIP),
            options.get('power', 2.0),
            options.get('baseline_removal', False),
        )
        return fuzen(signal, params)
    if metric == 'pvalue':
        return apen_nist_pvalue(signal, m)
    raise ConfigError(f"unknown metric '{metric}'")


def evaluate_cell(cell: Cell) -> List[dict]:
    """Build the cell's signal and compute every metric; failures become rows with an error name."""
    labels = dict(cell.labels)
    options = dict(cell.options)
    base = {'cell_id': cell.cell_id, **labels}

    try:
        signal = cell.recipe.build()
    except (ComplexityError, OSError) as e:
        logger.warning("cell %s: signal construction failed: %s", cell.cell_id, e)
        error = e.name if isinstance(e, ComplexityError) else type(e).__name__
        return [dict(base, metric=name, m=m, value=math.nan, error=error) for name, m in cell.metrics]

    rows = []
    for name, m in cell.metrics:
        row = dict(base, metric=name, m=m, n_samples=len(signal), value=math.nan, error='')
        try:
            row['value'] = float(measure(signal, name, m, options))
        except ComplexityError as e:
            logger.warning("cell %s: %s(m=%d) failed: %s", cell.cell_id, name, m, e)
            row['error'] = e.name
        rows.append(row)
    logger.info("cell %s done (%d metrics)", cell.cell_id, len(rows))
    return rows


def run_cells(cells: Sequence[Cell], workers: int = 1,
              evaluator: Callable[[Cell], List[dict]] = evaluate_cell) -> pd.DataFrame:
    """Evaluate cells sequentially or on a process pool; rows keep cell order."""
    if workers > 1 and len(cells) > 1:
        with Pool(processes=min(workers, len(cells))) as pool:
            chunks = pool.map(evaluator, cells)
    else:
        chunks = [evaluator(cell) for cell in cells]
    rows = [row for chunk in chunks for row in chunk]
    return pd.DataFrame(rows)


# ---- Statistics

def population_sd(values) -> float:
    values = np.asarray(values, dtype=np.float64)
    values = values[np.isfinite(values)]
    return float(np.std(values, ddof=0)) if values.size else math.nan


def relative_difference(reference, test) -> dict:
    """
    Fleet relative difference (mean_test - mean_ref) / |mean_ref| in percent.

    reported_pct applies the 0% rule: a change below 1 % that is also smaller
    than the fleet standard deviation is reported as 0.
    """
    ref = np.asarray(reference, dtype=np.float64)
    tst = np.asarray(test, dtype=np.float64)
    mean_ref, mean_test = float(np.nanmean(ref)), float(np.nanmean(tst))
    sd_ref, sd_test = population_sd(ref), population_sd(tst)
    delta = mean_test - mean_ref
    rel = delta / abs(mean_ref) * 100.0 if mean_ref != 0 else math.inf
    zeroed = abs(rel) < 1.0 and abs(delta) < sd_test
    return {
        'mean_ref': mean_ref, 'mean_test': mean_test, 'sd_ref': sd_ref, 'sd_test': sd_test,
        'delta': delta, 'rel_diff_pct': rel, 'reported_pct': 0.0 if zeroed else rel,
        'zeroed': bool(zeroed),
    }


# ---- Result

def _json_ready(value):
    if isinstance(value, dict):
        return {str(k): _json_ready(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_ready(v) for v in value]
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


def _records(frame: pd.DataFrame) -> list:
    if frame is None or frame.empty:
        return []
    return [_json_ready(rec) for rec in frame.to_dict(orient='records')]


@dataclass
class ExperimentResult:
    """
    Output of one experiment.

    Attributes:
        experiment: registry name
        table: one row per (cell, metric, m), with cell labels
        summary: aggregated statistics (ratios, fleet means, fits ...)
        checks: qualitative claims evaluated from the table
        params: parameters of the run (hashed into spec_hash)
        seeds: every seed used
        warnings: failed cells and caveats
        plot: long-format (experiment, x, series, value)
    """

    experiment: str
    table: pd.DataFrame
    summary: pd.DataFrame = field(default_factory=pd.DataFrame)
    checks: Dict[str, object] = field(default_factory=dict)
    params: dict = field(default_factory=dict)
    seeds: List[int] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)
    plot: pd.DataFrame = field(default_factory=pd.DataFrame)

    def __post_init__(self):
        if 'error' in self.table.columns:
            failed = self.table[self.table['error'].astype(str) != '']
            for _, row in failed.iterrows():
                self.warnings.append(f"cell {row['cell_id']}: {row['metric']}(m={row['m']}) -> {row['error']}")

    @property
    def spec_hash(self) -> str:
        return spec_hash({'experiment': self.experiment, 'params': self.params})

    def value(self, metric: str, m: int = NO_M, **labels) -> float:
        """Single value lookup from the table by metric, m and label columns."""
        mask = (self.table['metric'] == metric) & (self.table['m'] == m)
        for key, wanted in labels.items():
            mask &= self.table[key] == wanted
        hits = self.table.loc[mask, 'value']
        if hits.empty:
            raise KeyError(f"no cell for {metric}(m={m}) {labels}")
        return float(hits.iloc[0])

    def to_dict(self) -> dict:
        return _json_ready({
            'schema': SCHEMA_VERSION,
            'tool_version': TOOL_VERSION,
            'experiment': self.experiment,
            'spec_hash': self.spec_hash,
            'params': self.params,
            'seeds': self.seeds,
            'checks': self.checks,
            'warnings': self.warnings,
            'cells': _records(self.table),
            'summary': _records(self.summary),
        })

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, allow_nan=False)

    def write(self, outdir: Union[str, Path]) -> Dict[str, Path]:
        """Write <name>.json, <name>.csv and <name>_plot.csv atomically."""
        outdir = Path(outdir)
        stem = self.experiment
        paths = {
            'json': atomic_write_text(outdir / f"{stem}.json", self.to_json() + '\n'),
            'csv': atomic_write_text(outdir / f"{stem}.csv", self.table.to_csv(index=False)),
        }
        if not self.summary.empty:
            paths['summary'] = atomic_write_text(outdir / f"{stem}_summary.csv", self.summary.to_csv(index=False))
        plot = self.plot if not self.plot.empty else pd.DataFrame(columns=['experiment', 'x', 'series', 'value'])
        paths['plot'] = atomic_write_text(outdir / f"{stem}_plot.csv", plot.to_csv(index=False))
        return paths

    def summary_lines(self, width: int = 78) -> List[str]:
        lines = [f"Experiment: {self.experiment}  (spec {self.spec_hash})", '=' * min(width, 60)]
        if not self.summary.empty:
            with pd.option_context('display.width', width, 'display.max_columns', 12,
                                   'display.float_format', '{:.6g}'.format):
                lines.extend(self.summary.head(30).to_string(index=False).splitlines())
        for name, outcome in self.checks.items():
            mark = '✓' if outcome is True else ('✗' if outcome is False else '•')
            lines.append(f"  {mark} {name}: {outcome}")
        if self.warnings:
            lines.append(f"  ⚠ {len(self.warnings)} warning(s)")
        return lines


def long_format(experiment: str, frame: pd.DataFrame, x: str, series: Sequence[str]) -> pd.DataFrame:
    """Plot-ready rows (experiment, x, series, value); series joins the given columns."""
    if frame.empty:
        return pd.DataFrame(columns=['experiment', 'x', 'series', 'value'])
    labels = frame[list(series)].astype(str).agg(':'.join, axis=1)
    return pd.DataFrame({
        'experiment': experiment,
        'x': frame[x].to_numpy(),
        'series': labels.to_numpy(),
        'value': frame['value'].to_numpy(),
    })
