"""Consistency of the fluctuation estimator as the number of players grows.

For fixed rho and n, the root mean squared error of rho-hat should shrink
roughly like 1 / sqrt(M).  Both population modes are run.
"""
import argparse

import numpy as np

from arena_model.experiments import run_cell


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rho", type=float, default=2.0)
    ap.add_argument("--rounds", type=int, default=8)
    ap.add_argument("--reps", type=int, default=200)
    ap.add_argument("--seed", type=int, default=11)
    args = ap.parse_args()

    sizes = [256, 1024, 4096, 16384]
    root = np.random.SeedSequence(args.seed)
    print(f"rho {args.rho}  n {args.rounds}  reps {args.reps}  seed {args.seed}")
    print(f"{'population':>10} {'M':>6} {'mean':>8} {'RMSE':>8} {'RMSE*sqrt(M)':>13}")
    for population, ss in zip(("finite", "infinite"), root.spawn(2)):
        for M, child in zip(sizes, ss.spawn(len(sizes))):
            c = run_cell(args.rho, M, args.rounds, args.reps, child, population)
            rmse = np.sqrt(c.mse)
            print(f"{population:>10} {M:>6} {c.mean:>8.4f} {rmse:>8.4f} {rmse * np.sqrt(M):>13.3f}")


if __name__ == "__main__":
    main()
