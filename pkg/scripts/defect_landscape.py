#!/usr/bin/env python3
"""Sweep the d'Alembert defect of a builtin family over a square grid.

Writes (t, u, delta) rows as CSV for offline plotting, and prints the grid
supremum with its location, e.g.

    python scripts/defect_landscape.py --family quadlog --T 2 --step 0.1 --out defect.csv
    python scripts/defect_landscape.py --family "noisy-cosh,amplitude=1e-3,mode=sine,freq=5"
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

import numpy as np

from reccost import LOG_LINE, make_family, parse_family_spec, sup_defect
from reccost.grids import symmetric_grid


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--family", default="quadlog")
    ap.add_argument("--T", type=float, default=2.0)
    ap.add_argument("--step", type=float, default=0.1)
    ap.add_argument("--out", default=None, help="CSV output path (default: stdout summary only)")
    args = ap.parse_args()

    handle = make_family(parse_family_spec(args.family), domain=LOG_LINE)
    report = sup_defect(handle, args.T, args.step)
    print(f"family  : {handle.name}")
    print(f"grid    : [-{report.T:g}, {report.T:g}] step {report.step:.17g} ({report.count} points)")
    print(f"epsilon : {report.epsilon:.17g}")
    print(f"argmax  : (t, u) = ({report.argmax.t:.17g}, {report.argmax.u:.17g}),"
          f" delta = {report.argmax.delta:.17g}")

    if args.out:
        _, axis = symmetric_grid(args.T, args.step)
        vals = handle(axis)
        delta = handle(np.add.outer(axis, axis)) + handle(np.subtract.outer(axis, axis)) \
            - 2.0 * np.outer(vals, vals)
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write("t,u,delta\n")
            for i, t in enumerate(axis):
                for j, u in enumerate(axis):
                    fh.write(f"{t:.17g},{u:.17g},{delta[i, j]:.17g}\n")
        print(f"wrote   : {args.out}")


if __name__ == "__main__":
    main()
