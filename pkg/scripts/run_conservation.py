#!/usr/bin/env python3
"""Long-trajectory mass/energy drift experiment.

Usage: python3 scripts/run_conservation.py [config] [out.csv]
"""

import sys

from snls.cli import main

if __name__ == "__main__":
    cfg = sys.argv[1] if len(sys.argv) > 1 else "scripts/example.cfg"
    out = sys.argv[2] if len(sys.argv) > 2 else "conservation.csv"
    sys.exit(main(["conservation", "--config", cfg, "--out", out]))
