"""Chiral population rho_LL(t) for a range of dephasing rates.

In the overdamped regime rho_LL - rho_RR relaxes at 4 V^2 / Gamma; the table
shows how large Gamma must be to hold rho_LL above a threshold at t = 10 / V.
"""
import argparse
import math

import numpy as np

from decoherence.measurement import chiral_decoherence_run, chiral_hamiltonian


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--V", type=float, default=1.0)
    ap.add_argument("--rates", default="0,10,100,1000,2000,5000")
    ap.add_argument("--t-max", type=float, default=10.0)
    ap.add_argument("--dt", type=float, default=1e-3)
    args = ap.parse_args()

    L = np.array([1, 1], dtype=complex) / math.sqrt(2)
    h = chiral_hamiltonian(args.V)
    print(f"{'Gamma/V':>8s} {'rho_LL(t_max)':>14s} {'overdamped estimate':>20s}")
    for rate in (float(r) for r in args.rates.split(",")):
        traj = chiral_decoherence_run(h, rate * args.V, np.outer(L, L.conj()), args.t_max, args.dt)
        est = 0.5 * (1 + math.exp(-4 * args.V / rate * args.t_max * args.V)) if rate > 0 else float("nan")
        print(f"{rate:8g} {traj.rho_LL[-1]:14.6f} {est:20.6f}")


if __name__ == "__main__":
    main()
