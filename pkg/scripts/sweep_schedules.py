#!/usr/bin/env python3
"""Sweep tail bases and print how the certified constants move.

For each tail base c (weights t_n = (c-1)/c^n) the script rebuilds the
chain, recomputes the exact level certificates, and prints the float
limit diagnostics (1 - r_n)^{N(n)} vs e^{-r_n N(n)}.

Usage: python scripts/sweep_schedules.py --config configs/z_depth3.json [--bases 2 3 4]
"""

from __future__ import annotations

import argparse
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from folnerdom.cli import _build_chain, load_config
from folnerdom.dominance import dominance_report, limit_diagnostics
from folnerdom.schedules import Schedule


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", required=True)
    ap.add_argument("--bases", type=int, nargs="+", default=None)
    ap.add_argument("--cap", type=int, default=None)
    args = ap.parse_args()

    cfg = load_config(args.config)
    bases = args.bases or cfg.get("sweep", {}).get("tail_bases", [2, 3, 4])
    worst = 0
    for c in bases:
        local = dict(cfg)
        local["schedule"] = dict(cfg.get("schedule", {}), tail_base=c)
        chain = _build_chain(local, args.cap, None)
        print(f"tail base {c}:")
        for n in range(2, chain.depth + 1):
            rep = dominance_report(chain, n, args.cap)
            ce = "inf" if rep.c_emp is None else f"{float(rep.c_emp):.3f}"
            print(f"  n={n} min_scaled={float(rep.min_scaled):.6f} "
                  f"bound={float(rep.bound):.6f} C_emp={ce} {rep.verdict}")
            if rep.verdict != "pass":
                worst = 2
        for row in limit_diagnostics(Schedule(tail_base=c, depth=chain.depth),
                                     range(2, chain.depth + 1)):
            print(f"  n={row['n']} rN={row['r_N']:.4f} "
                  f"(1-r)^N={row['pow']:.6f} e^-rN={row['limit']:.6f} "
                  f"gap={row['gap']:.2e}")
    return worst


if __name__ == "__main__":
    sys.exit(main())
