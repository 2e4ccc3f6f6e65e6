"""Fringe visibility of an even cat under cavity damping, for several amplitudes."""
import argparse

import numpy as np

from decoherence.cats import VISIBILITY_COLUMNS, coherence_time, visibility_curve
from decoherence.io import write_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kappa", type=float, default=1e4, help="cavity damping rate [1/s]")
    ap.add_argument("--alphas", default="1,1.5,2.236,3")
    ap.add_argument("--t-max", type=float, default=1e-4)
    ap.add_argument("--out", default="cat_visibility")
    args = ap.parse_args()

    times = np.linspace(0, args.t_max, 201)
    for i, a in enumerate(float(x) for x in args.alphas.split(",")):
        rows = list(visibility_curve(a, args.kappa, times))
        write_csv(f"{args.out}_{i:02d}.csv", VISIBILITY_COLUMNS, rows)
        print(f"|alpha|^2 = {a * a:6.3f}: 1/e time {coherence_time(a, args.kappa):.3e} s, "
              f"visibility at t_max {rows[-1][1]:.3e}")


if __name__ == "__main__":
    main()
