#!/usr/bin/env python3
"""Closed-form QFI vs the two truncated-Fock oracles over a resource grid.

Usage: python scripts/oracle_sweep.py [--seed N] [--pairs K]
"""
import argparse
import math
import time

import numpy as np

from mziqfi.cli import RunConfig, verify_report


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--seed", type=int, default=20261016)
    p.add_argument("--pairs", type=int, default=4, help="random (arg a1, arg a2) pairs per resource point")
    args = p.parse_args()

    rng = np.random.default_rng(args.seed)
    angles = rng.uniform(0, 2 * math.pi, (args.pairs, 2))
    print(f"{'|a1|':>5} {'|a2|':>5} {'r':>4} {'d':>3} {'F11':>10} {'F12':>10} {'F22':>10} {'max disc':>9}")
    start = time.perf_counter()
    worst = 0.0
    for m1 in (0.0, 0.5, 1.0):
        for m2 in (0.0, 0.5, 1.0):
            for r in (0.0, 0.3, 0.6):
                for t1, t2 in angles:
                    rep = verify_report(RunConfig(alpha1=(m1 * math.cos(t1), m1 * math.sin(t1)), alpha2=(m2 * math.cos(t2), m2 * math.sin(t2)), r=r))
                    q = rep["closed_form"]
                    worst = max(worst, rep["max_discrepancy"])
                    print(f"{m1:5.2f} {m2:5.2f} {r:4.1f} {rep['truncation'][0]:3d} {q['f11']:10.6f} {q['f12']:10.6f} {q['f22']:10.6f} {rep['max_discrepancy']:9.1e}")
    print(f"worst discrepancy {worst:.2e} in {time.perf_counter() - start:.1f}s")


if __name__ == "__main__":
    main()
