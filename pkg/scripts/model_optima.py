#!/usr/bin/env python3
"""Maxima of the four model QFIs over arg(alpha1), arg(alpha2) at fixed resources.

For each (n1, n2, r) prints the refined maximum of every model, the analytic
nuisance-model maximum n1 + sinh^2 r + n2 e^{2r}, and the upper-arm value on
the alpha1 = i alpha2 family, (2 + cosh 2r) sinh^2 r.
"""
import argparse
import itertools

from mziqfi import f_a_max, f_c_special
from mziqfi.qfi import ModelKind
from mziqfi.scan import ScanGrid, refine_max, run_scan


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--steps", type=int, default=64)
    args = p.parse_args()

    resources = itertools.product((0.0, 0.5, 1.0, 2.0), (0.0, 0.5, 1.0, 2.0), (0.0, 0.25, 0.5, 0.8))
    print(f"{'n1':>4} {'n2':>4} {'r':>5} {'Fa max':>10} {'Fb max':>10} {'Fc max':>10} {'Fd max':>10} {'Fa analytic':>11} {'Fc(a1=ia2)':>10}")
    for n1, n2, r in resources:
        grid = ScanGrid(n1, n2, r, args.steps, args.steps)
        res = run_scan(grid)
        best = {m: refine_max(grid, res.argmax_per_model[m][:2], m).value for m in ModelKind}
        row = " ".join(f"{best[m]:10.6f}" for m in ModelKind)
        print(f"{n1:4.1f} {n2:4.1f} {r:5.2f} {row} {f_a_max(n1, n2, r):11.6f} {f_c_special(r):10.6f}")


if __name__ == "__main__":
    main()
