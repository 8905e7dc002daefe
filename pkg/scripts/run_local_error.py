#!/usr/bin/env python3
"""Strong one-step error vs step size, against same-path refined
references.

Usage: python3 scripts/run_local_error.py [config] [out.csv]
"""

import sys

from snls.cli import main

if __name__ == "__main__":
    cfg = sys.argv[1] if len(sys.argv) > 1 else "scripts/example.cfg"
    out = sys.argv[2] if len(sys.argv) > 2 else "local_error.csv"
    sys.exit(main(["local-error", "--config", cfg, "--out", out]))
