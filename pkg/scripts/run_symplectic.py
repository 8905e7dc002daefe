#!/usr/bin/env python3
"""Frozen-noise one-step Jacobian symplecticity defect.

Usage: python3 scripts/run_symplectic.py [config] [out.txt]
"""

import sys

from snls.cli import main

if __name__ == "__main__":
    cfg = sys.argv[1] if len(sys.argv) > 1 else "scripts/symplectic.cfg"
    out = sys.argv[2] if len(sys.argv) > 2 else "symplectic.txt"
    sys.exit(main(["symplectic", "--config", cfg, "--out", out]))
