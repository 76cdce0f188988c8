"""
Reproduce every registered experiment
=====================================
Runs each study in the registry and writes its JSON / CSV / plot CSV files.
The TRNG comparison runs only when --trng-dir points at sample files.

Usage:
    python scripts/reproduce_all.py [--outdir results] [--workers 4] [--only line-scan m-sweep]

Set COMPLEXITY_FULL_FLEET=1 for 100-instance PUF fleets (slow).
"""

import argparse
import sys
import time
from pathlib import Path

# Add project root to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from modules.experiments.registry import EXPERIMENTS, get_experiment
from modules.shared.config import get_output_dir, setup_logging
from modules.shared.errors import ComplexityError


def run_one(name: str, outdir: str, workers, trng_files) -> bool:
    print(f"\n{'=' * 60}")
    print(f"Running: {name}")
    print(f"{'=' * 60}")
    kwargs = {'workers': workers} if workers else {}
    if name == 'trng':
        if not trng_files:
            print("⚠️  No TRNG files given (--trng-dir), skipped")
            return True
        kwargs['files'] = trng_files

    started = time.time()
    try:
        result = get_experiment(name)(**kwargs)
    except ComplexityError as e:
        print(f"❌ {name} failed: {e}")
        return False

    paths = result.write(outdir)
    for line in result.summary_lines():
        print(line)
    print(f"✅ {name} done in {time.time() - started:.1f}s -> {paths['json']}")
    return True


def main() -> int:
    parser = argparse.ArgumentParser(description='Run every registered experiment')
    parser.add_argument('--outdir', default=None)
    parser.add_argument('--workers', type=int, default=None)
    parser.add_argument('--only', nargs='+', choices=sorted(EXPERIMENTS))
    parser.add_argument('--trng-dir', default=None, help='directory of TRNG *.txt files')
    parser.add_argument('-v', '--verbose', action='count', default=0)
    args = parser.parse_args()
    setup_logging(args.verbose)

    outdir = args.outdir or get_output_dir()
    trng_files = sorted(str(p) for p in Path(args.trng_dir).glob('*.txt')) if args.trng_dir else []
    names = args.only or list(EXPERIMENTS)

    failures = [name for name in names if not run_one(name, outdir, args.workers, trng_files)]

    print(f"\n{'=' * 60}")
    print(f"  {len(names) - len(failures)}/{len(names)} experiments completed, results in {outdir}")
    if failures:
        print(f"  Failed: {', '.join(failures)}")
    print(f"{'=' * 60}")
    return 1 if failures else 0


if __name__ == '__main__':
    sys.exit(main())
