#!/usr/bin/env python3
"""Sweep estimated embedding probabilities over (m, L) grids.

Produces the standard CSV on stdout or into --out.  Typical run:

    python scripts/run_sweep.py --m-range 1..8 --L-range 32..256 --step 32 \
        --trials 2000 --seed 7 --out sweep.csv
"""

import argparse
import sys

from gapembed import __version__
from gapembed.experiments import rows_to_csv, sweep


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m-range", default="1..8")
    ap.add_argument("--L-range", default="16..256")
    ap.add_argument("--step", type=int, default=16, help="stride through the L range")
    ap.add_argument("--trials", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()

    m_lo, m_hi = (int(v) for v in args.m_range.split(".."))
    L_lo, L_hi = (int(v) for v in args.L_range.split(".."))
    rows = sweep(
        range(m_lo, m_hi + 1),
        range(L_lo, L_hi + 1, args.step),
        args.trials,
        args.seed,
        jobs=args.jobs,
    )
    text = rows_to_csv(rows, version=__version__)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
