"""Caldeira-Leggett relaxation of a moving packet against the moment equations.

Prints <p>(t) from the grid evolution beside p0 exp(-2 gamma t) and the
smallest eigenvalue of rho, which goes negative for cold, narrow packets.
"""
import argparse

from decoherence.evolution import (EvolutionParams, GridDensityMatrix, GridSpec, caldeira_leggett_moments,
                                   evolve_caldeira_leggett, gaussian_packet, moments)
from decoherence.io import write_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--gamma", type=float, default=0.5)
    ap.add_argument("--temperature", type=float, default=1.0)
    ap.add_argument("--p0", type=float, default=1.0)
    ap.add_argument("--sigma", type=float, default=1.0)
    ap.add_argument("--n", type=int, default=256)
    ap.add_argument("--half-width", type=float, default=12.0)
    ap.add_argument("--relaxation-times", type=float, default=2.0)
    ap.add_argument("--steps", type=int, default=1000)
    ap.add_argument("--out", default="cl_relaxation.csv")
    args = ap.parse_args()

    grid = GridSpec(-args.half_width, args.half_width, args.n)
    t_end = args.relaxation_times / (2 * args.gamma)
    p = EvolutionParams(mass=1.0, gamma=args.gamma, temperature=args.temperature, dt=t_end / args.steps,
                        steps=args.steps, record_every=max(1, args.steps // 20))
    traj = evolve_caldeira_leggett(gaussian_packet(grid, 0.0, args.p0, args.sigma), p)
    rows = []
    for t, v, lam_min in zip(traj.times, traj.states, traj.min_eigenvalues):
        m = moments(GridDensityMatrix(grid, v, check=False))
        ref = caldeira_leggett_moments(0.0, args.p0, 1.0, args.gamma, t)
        rows.append((t, m.p, ref.mean_p, m.x, ref.mean_x, lam_min))
        print(f"t={t:7.4f}  <p>={m.p:9.6f}  oracle={ref.mean_p:9.6f}  <x>={m.x:8.5f}  min eig={lam_min: .2e}")
    write_csv(args.out, ("t", "mean_p", "mean_p_oracle", "mean_x", "mean_x_oracle", "min_eigenvalue"), rows)


if __name__ == "__main__":
    main()
