#!/usr/bin/env python3
"""Print the hierarchy parameter table for a base gap bound and report the
feasibility horizon (the last level at which all stepping facts still hold).

At desk-scale m the additive slope correction is gigantic, so the horizon is
typically 1; it grows only for very large m.  The exact exponent-space values
stay meaningful at every level even where floats overflow or underflow.
"""

import argparse
import sys

from gapembed import DEFAULT_EXPONENTS, base_params, level_table
from gapembed.params import feasibility_horizon


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m", type=int, default=10)
    ap.add_argument("--levels", type=int, default=8)
    args = ap.parse_args()

    rows = level_table(DEFAULT_EXPONENTS, base_params(args.m), args.levels)
    print("level  R            log_Delta    sigma_x        q_tri     q_inv     facts")
    for p, facts in rows:
        notes = []
        if not facts.delta_ratio_ok:
            notes.append("delta-ratio")
        if not facts.q_tri_ok:
            notes.append("q-tri")
        if not facts.q_inv_ok:
            notes.append("q-inv")
        notes.extend(facts.slope_violations)
        print(
            f"{p.level:<6d} {float(p.R):<12.4f} {float(p.log_Delta):<12.4f} "
            f"{p.sigma_x:<14.6g} {p.q_tri:<9.4f} {p.q_inv:<9.4f} "
            f"{'ok' if not notes else ';'.join(notes)}"
        )
    print(f"feasibility horizon: level {feasibility_horizon(rows)}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
