#!/usr/bin/env python3
"""Dev entrypoint for running lab experiments from a checkout.

Usage:
    # Factor complexity table
    python scripts/run_lab.py complexity --max-n 64 --out p.csv

    # Pressure curve of a distance potential on four threads
    python scripts/run_lab.py pressure --a 0.5 --gamma-grid 0:8:0.5 --threads 4 --out curve.csv

Environment variables:
    TMLAB_THERMO_NMAX: Truncation order of the return series (default: 64)
    TMLAB_WORKER_THREADS: Sweep threads, 0 for all cores (default: 0)
    TMLAB_INTERVAL_DEPTH: Cylinder depth of interval maps (default: 16)
"""

import sys
from pathlib import Path

# Add parent directory to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

from tmlab.cli import main

if __name__ == "__main__":
    sys.exit(main())
