#!/usr/bin/env python3
"""Produce the two regime figures: q1(t) below and above the critical pumping.

Writes one CSV and one SVG per regime into the output directory, using the
same ensemble machinery as `qprob bec-sim`.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from qprob import cli


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="out", help="output directory (default: ./out)")
    parser.add_argument("--paths", type=int, default=2000)
    parser.add_argument("--sigma", type=float, default=0.1)
    parser.add_argument("--tmax", type=float, default=100.0)
    parser.add_argument("--seed", type=int, default=int(os.environ.get("QPROB_SEED", "0")))
    args = parser.parse_args()

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for label, b in (("subcritical", 0.25), ("supercritical", 0.5)):
        csv_path = out_dir / f"interference_{label}.csv"
        report_path = out_dir / f"interference_{label}.json"
        code = cli.main([
            "bec-sim",
            "--b", str(b),
            "--s0", "-0.9",
            "--x0", "0",
            "--sigma", str(args.sigma),
            "--tmax", str(args.tmax),
            "--paths", str(args.paths),
            "--seed", str(args.seed),
            "--stride", "100",
            "--out", str(csv_path),
            "--report", str(report_path),
            "--plot",
        ])
        if code != 0:
            return code
        print(f"{label}: b = {b} -> {csv_path}, {csv_path.with_suffix('.svg')}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
