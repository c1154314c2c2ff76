#!/usr/bin/env python3
"""Convergence / transfer / weak (1,1) / Kadison battery for a config.

Thin wrapper over the ``simulate`` subcommand that echoes the CSV rows to
stdout and reports the exit code meaning.

Usage: python scripts/run_simulation.py --config configs/z_depth3.json --out out/sim [--seed N]
"""

from __future__ import annotations

import argparse
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from folnerdom.cli import EXIT_BUDGET, EXIT_FAIL, main as cli_main


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", required=True)
    ap.add_argument("--out", default="out/sim")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--cap", type=int, default=None)
    args = ap.parse_args()

    argv = ["simulate", "--config", args.config, "--out", args.out,
            "--seed", str(args.seed)]
    if args.cap is not None:
        argv += ["--cap", str(args.cap)]
    code = cli_main(argv)

    csv_path = os.path.join(args.out, "simulate.csv")
    if os.path.exists(csv_path):
        print(open(csv_path).read(), end="")
    if code == EXIT_FAIL:
        print("result: a certified check FAILED", file=sys.stderr)
    elif code == EXIT_BUDGET:
        print("result: stopped by size/budget cap", file=sys.stderr)
    else:
        print("result: all checks passed")
    return code


if __name__ == "__main__":
    sys.exit(main())
