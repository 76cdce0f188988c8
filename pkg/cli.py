"""
Signal complexity toolkit - command line entry point

Usage:
    python cli.py generate --preset lcg-bad --n 10000
    python cli.py analyze results/lcg-bad.txt --m 2 3
    python cli.py experiment prng-analog
    python cli.py report results/prng-analog.json
"""

import sys
from pathlib import Path

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent))

from modules.cli.commands import main

if __name__ == "__main__":
    exit(main())
