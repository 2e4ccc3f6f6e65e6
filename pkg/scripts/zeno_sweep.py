"""Sweep the pointer coupling of the monitored two-level toy and classify each run.

Writes the scan table plus one P2(t) series per coupling.
"""
import argparse

from decoherence.io import write_csv
from decoherence.zeno_toy import SCAN_COLUMNS, gamma_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--V", type=float, default=1.0)
    ap.add_argument("--E", type=float, default=20.0)
    ap.add_argument("--max-power", type=int, default=12, help="couplings 0 and 2^0 .. 2^max-power")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default="zeno_scan")
    args = ap.parse_args()

    gammas = [0.0] + [2.0**k for k in range(args.max_power + 1)]
    recs = gamma_sweep(gammas, V=args.V, E=args.E, workers=args.workers)
    write_csv(args.out + ".csv", SCAN_COLUMNS, [r.scan_row() for r in recs])
    for i, r in enumerate(recs):
        write_csv(f"{args.out}_series{i:03d}.csv", ("t", "P2"), zip(r.times, r.p2))
    print(f"{'gamma':>8s} {'early':>7s} {'middle':>7s} {'maxP2':>10s}  regime")
    for r in recs:
        print(f"{r.params.gammaCoupling:8g} {r.early_slope:7.3f} {r.middle_slope:7.3f} {r.max_p2:10.3e}  {r.regime}")


if __name__ == "__main__":
    main()
