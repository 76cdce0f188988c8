"""
Command-line front end
======================
    generate    write a signal file from a preset or inline LCG parameters
    analyze     score a signal file (JSON or CSV report)
    experiment  run a registered study and write JSON / CSV / plot CSV
    report      re-render a saved JSON result

Exit codes: 0 ok, 2 configuration error, 3 I/O error, 4 every metric failed.
"""

from __future__ import annotations

import argparse
import inspect
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence

import pandas as pd

from modules.experiments.registry import DESCRIPTIONS, EXPERIMENTS, get_experiment
from modules.generators.lcg import LcgParams
from modules.generators.sources import GeneratorSpec, generate, preset_names
from modules.generators.transforms import LineInjection, binarize, inject_line, quantize_levels
from modules.metrics.nist import embedding_bound
from modules.metrics.report import analyze
from modules.shared.config import (
    DEFAULT_APEN_R, DEFAULT_FUZEN_R, DEFAULT_MEMBERSHIP, DEFAULT_N, TOOL_VERSION, get_output_dir, setup_logging,
)
from modules.shared.data_loader import atomic_write_text, read_signal_file, write_signal_file
from modules.shared.errors import (
    EXIT_ALL_METRICS_FAILED, EXIT_CONFIG, EXIT_IO, EXIT_OK, ComplexityError, ConfigError,
)

logger = logging.getLogger(__name__)

COMMANDS = ('generate', 'analyze', 'experiment', 'report')


@dataclass
class RunConfig:
    command: str
    input: Optional[str] = None
    output: Optional[str] = None
    preset: Optional[str] = None
    lcg: Optional[Sequence[int]] = None
    seed: Optional[int] = None
    n: int = DEFAULT_N
    m_list: List[int] = field(default_factory=lambda: [2, 3])
    domain: Optional[str] = None
    output_format: str = 'json'
    experiment: Optional[str] = None
    outdir: Optional[str] = None
    workers: Optional[int] = None
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command '{self.command}'")
        if self.output_format not in ('json', 'csv'):
            raise ConfigError(f"output format must be json or csv, got {self.output_format}")

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> 'RunConfig':
        options = {k: v for k, v in vars(args).items() if k not in _CONFIG_FIELDS and v is not None}
        return cls(
            command=args.command,
            input=getattr(args, 'input', None),
            output=getattr(args, 'output', None),
            preset=getattr(args, 'preset', None),
            lcg=getattr(args, 'lcg', None),
            seed=getattr(args, 'seed', None),
            n=getattr(args, 'n', None) or DEFAULT_N,
            m_list=list(getattr(args, 'm', None) or [2, 3]),
            domain=getattr(args, 'domain', None),
            output_format=getattr(args, 'format', None) or 'json',
            experiment=getattr(args, 'name', None),
            outdir=getattr(args, 'outdir', None),
            workers=getattr(args, 'workers', None),
            options=options,
        )

    def require_input(self) -> Path:
        path = Path(self.input)
        if not path.exists():
            raise FileNotFoundError(f"input file not found: {path}")
        return path


_CONFIG_FIELDS = {'command', 'input', 'output', 'preset', 'lcg', 'seed', 'n', 'm', 'domain', 'format',
                  'name', 'outdir', 'workers', 'verbose', 'handler'}


def _error(message: str) -> None:
    print(f"Error: {message}", file=sys.stderr)


# ---- generate

def cmd_generate(cfg: RunConfig) -> int:
    """Write a signal file and print its provenance line."""
    opts = cfg.options
    if cfg.lcg:
        modulus, multiplier, increment, seed = cfg.lcg
        spec = GeneratorSpec('lcg', n=cfg.n, lcg=LcgParams(modulus, multiplier, increment, seed), name='lcg-custom')
    else:
        spec = GeneratorSpec.from_preset(cfg.preset or 'mt0', n=cfg.n, seed=cfg.seed)

    signal = generate(spec)
    if opts.get('line_period'):
        signal = inject_line(signal, LineInjection(period=opts['line_period']))
    if opts.get('levels'):
        signal = quantize_levels(signal, opts['levels'], opts.get('noise_sigma', 0.0), opts.get('noise_seed', 0))
    if opts.get('binarize'):
        signal = binarize(signal, opts.get('threshold', 0.5))

    output = Path(cfg.output or Path(get_output_dir()) / f"{spec.name}.txt")
    write_signal_file(signal, output)
    info = spec.describe()
    seed = info.get('seed', info.get('x0'))
    print(f"✓ {info.get('preset', spec.variant)}: N={len(signal)} seed={seed} "
          f"normalization={spec.normalize} domain={signal.domain.value} -> {output}")
    return EXIT_OK


# ---- analyze

def cmd_analyze(cfg: RunConfig) -> int:
    """Score a signal file; exit 4 when every metric failed."""
    path = cfg.require_input()
    signal = read_signal_file(path, domain=cfg.domain)
    opts = cfg.options

    if signal.is_binary:
        bound = embedding_bound(len(signal))
        too_large = [m for m in cfg.m_list if m > bound]
        if too_large:
            _error(f"m={too_large} refused for a binary signal of N={len(signal)}: the NIST approximate "
                   f"entropy test requires m < floor(log2 N) - 5 (largest accepted m here: {bound})")
            return EXIT_CONFIG

    report = analyze(
        signal, cfg.m_list,
        apen_r=opts.get('apen_r', DEFAULT_APEN_R),
        fuzen_r=opts.get('fuzen_r', DEFAULT_FUZEN_R),
        membership=opts.get('membership', DEFAULT_MEMBERSHIP),
        power=opts.get('power', 2.0),
        baseline_removal=bool(opts.get('baseline_removal', False)),
    )

    if cfg.output_format == 'csv':
        text = pd.DataFrame(report.to_rows()).to_csv(index=False)
    else:
        text = json.dumps(report.to_dict(), sort_keys=True, indent=2) + '\n'
    output = Path(cfg.output or Path(get_output_dir()) / f"{path.stem}_report.{cfg.output_format}")
    atomic_write_text(output, text)

    print(f"Signal: {signal.describe()}")
    if report.disentropy_score is not None:
        print(f"  D  = {report.disentropy_score:.6g}  (D2 = {report.disentropy_d2:.10g})")
    for m in sorted(set(report.apen) | set(report.fuzen)):
        line = f"  m={m}: ApEn={report.apen.get(m, float('nan')):.4f}  FuzEn={report.fuzen.get(m, float('nan')):.4f}"
        if report.apen_pvalue and m in report.apen_pvalue:
            line += f"  p={report.apen_pvalue[m]:.4g}"
        print(line)
    for label, err in sorted(report.errors.items()):
        print(f"  ⚠ {label}: {err['error']} ({err['message']})", file=sys.stderr)
    print(f"✓ report -> {output}")

    if report.all_failed:
        return EXIT_ALL_METRICS_FAILED
    return EXIT_OK


# ---- experiment

def _experiment_kwargs(func, cfg: RunConfig) -> dict:
    """Map CLI overrides onto the parameters the study actually accepts."""
    accepted = inspect.signature(func).parameters
    opts = cfg.options
    candidates = {
        'n': opts.get('n_override'),
        'm_list': opts.get('m_override'),
        'n_instances': opts.get('instances'),
        'n_responses': opts.get('responses'),
        'n_resp_grid': [opts['n_resp']] if opts.get('n_resp') else None,
        'files': opts.get('files'),
        'workers': cfg.workers,
    }
    kwargs = {k: v for k, v in candidates.items() if v is not None and k in accepted}
    ignored = [k for k, v in candidates.items() if v is not None and k not in accepted and k != 'workers']
    for key in ignored:
        logger.warning("option %s does not apply to experiment %s, ignored", key, cfg.experiment)
    return kwargs


def cmd_experiment(cfg: RunConfig) -> int:
    func = get_experiment(cfg.experiment)
    kwargs = _experiment_kwargs(func, cfg)
    if cfg.experiment == 'trng' and 'files' not in kwargs:
        raise ConfigError("the trng experiment needs --files")

    result = func(**kwargs)
    paths = result.write(cfg.outdir or get_output_dir())
    for line in result.summary_lines():
        print(line)
    for kind, path in paths.items():
        print(f"✓ {kind}: {path}")
    if result.warnings:
        print(f"⚠ {len(result.warnings)} warning(s); see {paths['json']}", file=sys.stderr)
    return EXIT_OK


# ---- report

def cmd_report(cfg: RunConfig) -> int:
    """Print the summary of a saved experiment or analysis JSON, optionally as CSV."""
    path = cfg.require_input()
    try:
        payload = json.loads(path.read_text(encoding='utf-8'))
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: not a JSON result ({e})") from None

    if 'cells' in payload:
        frame = pd.DataFrame(payload.get('summary') or payload['cells'])
        title = f"Experiment: {payload.get('experiment')}  (spec {payload.get('spec_hash')})"
    else:
        rows = [{'metric': 'disentropy_score', 'm': '', 'value': payload.get('disentropy_score')}]
        for name in ('apen', 'fuzen', 'apen_pvalue'):
            rows.extend({'metric': name, 'm': m, 'value': v} for m, v in sorted((payload.get(name) or {}).items()))
        frame = pd.DataFrame(rows)
        title = f"Report (tool {payload.get('tool_version')}, spec {payload.get('spec_hash')})"

    if cfg.output_format == 'csv' and cfg.output:
        atomic_write_text(cfg.output, frame.to_csv(index=False))
        print(f"✓ csv -> {cfg.output}")
        return EXIT_OK

    print(title)
    print('=' * 60)
    print(frame.to_string(index=False))
    for name, outcome in (payload.get('checks') or {}).items():
        print(f"  • {name}: {outcome}")
    return EXIT_OK


# ---- Parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description='Signal complexity toolkit: disentropy, ApEn, FuzEn for PRNG and PUF signals',
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument('--version', action='version', version=f"%(prog)s {TOOL_VERSION}")
    parser.add_argument('-v', '--verbose', action='count', default=0, help='-v info, -vv debug')
    sub = parser.add_subparsers(dest='command', required=True)

    gen = sub.add_parser('generate', help='write a signal file')
    gen.add_argument('--preset', help=f"one of: {', '.join(preset_names())}")
    gen.add_argument('--lcg', type=int, nargs=4, metavar=('M', 'A', 'C', 'X0'), help='inline LCG parameters')
    gen.add_argument('--seed', type=int, help='overrides x0 (LCG) or the MT seed')
    gen.add_argument('--n', type=int, default=DEFAULT_N)
    gen.add_argument('--binarize', action='store_true', help='comparator at --threshold')
    gen.add_argument('--threshold', type=float)
    gen.add_argument('--levels', type=int, help='quantize to 2..10 levels')
    gen.add_argument('--noise-sigma', type=float)
    gen.add_argument('--noise-seed', type=int)
    gen.add_argument('--line-period', type=int, help='inject a diagonal line every P samples')
    gen.add_argument('--output', '-o')

    ana = sub.add_parser('analyze', help='score a signal file')
    ana.add_argument('input')
    ana.add_argument('--m', type=int, nargs='+', default=[2, 3])
    ana.add_argument('--domain', choices=['analog', 'binary', 'multilevel'])
    ana.add_argument('--format', choices=['json', 'csv'], default='json')
    ana.add_argument('--apen-r', type=float)
    ana.add_argument('--fuzen-r', type=float)
    ana.add_argument('--membership')
    ana.add_argument('--power', type=float)
    ana.add_argument('--baseline-removal', action='store_true', default=None)
    ana.add_argument('--output', '-o')

    exp = sub.add_parser('experiment', help='run a registered study',
                         epilog='\n'.join(f"  {k:<18} {v}" for k, v in DESCRIPTIONS.items()),
                         formatter_class=argparse.RawDescriptionHelpFormatter)
    exp.add_argument('name', help=f"one of: {', '.join(EXPERIMENTS)}")
    exp.add_argument('--outdir')
    exp.add_argument('--workers', type=int)
    exp.add_argument('--n', dest='n_override', type=int)
    exp.add_argument('--m', dest='m_override', type=int, nargs='+')
    exp.add_argument('--instances', type=int)
    exp.add_argument('--responses', type=int)
    exp.add_argument('--n-resp', type=int)
    exp.add_argument('--files', nargs='+')

    rep = sub.add_parser('report', help='re-render a saved JSON result')
    rep.add_argument('input')
    rep.add_argument('--format', choices=['json', 'csv'], default='json')
    rep.add_argument('--output', '-o')
    return parser


HANDLERS = {
    'generate': cmd_generate,
    'analyze': cmd_analyze,
    'experiment': cmd_experiment,
    'report': cmd_report,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.verbose)
    try:
        cfg = RunConfig.from_args(args)
        return HANDLERS[cfg.command](cfg)
    except ComplexityError as e:
        _error(str(e))
        return e.exit_code
    except OSError as e:
        _error(str(e))
        return EXIT_IO
