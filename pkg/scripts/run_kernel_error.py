#!/usr/bin/env python3
"""Interpolated-kernel approximation order for d=1 and d=2.

Usage: python3 scripts/run_kernel_error.py [out_prefix]
"""

import sys

from snls.experiments import cmd_kernel_error

if __name__ == "__main__":
    prefix = sys.argv[1] if len(sys.argv) > 1 else "kernel_error"
    for d in (1, 2):
        table = cmd_kernel_error(d)
        out = f"{prefix}_d{d}.csv"
        table.write_csv(out)
        print(f"d={d}: slope {table.slope:.4f} -> {out}")
