#!/usr/bin/env python3
"""Run the wall-start and hole-start frequency checks and print the reports.

The wall check compares the empirical fixed-position rate of a size-l wall
against both candidate rates 2^-(l-1) and 2^-l and prints z-scores for each;
the hole check compares the fitting-hole start rate against 1/2.
"""

import argparse
import json
import sys

from gapembed import hole_frequency_check, wall_frequency_check


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m", type=int, default=4)
    ap.add_argument("--l", type=int, default=4)
    ap.add_argument("--wall-samples", type=int, default=1_000_000)
    ap.add_argument("--hole-samples", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rep = wall_frequency_check(args.m, args.l, args.wall_samples, args.seed)
    print(json.dumps(rep.to_json()))
    rep = hole_frequency_check(args.m, args.hole_samples, args.seed)
    print(json.dumps(rep.to_json()))
    return 0


if __name__ == "__main__":
    sys.exit(main())
