"""Replication study of the fluctuation estimator over the 18 published cells."""
import argparse
import json
import os

from arena_model.experiments import Table5Config, check_against_reference, run_table5


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--reps", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=2019)
    ap.add_argument("--population", choices=("finite", "infinite"), default="finite")
    ap.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    ap.add_argument("--json", help="also write the cell summaries to this file")
    args = ap.parse_args()

    cfg = Table5Config(reps=args.reps, seed=args.seed, population=args.population, workers=args.workers)
    cells = run_table5(cfg)
    print(f"seed {cfg.seed}  reps {cfg.reps}  population {cfg.population}")
    print(f"{'rho':>4} {'M':>5} {'n':>3} {'mean':>8} {'ref':>7} {'MSE':>8} {'ref':>7}  ok")
    rows = []
    for c in cells:
        chk = check_against_reference(c)
        ref = chk["reference"]
        print(f"{c.rho:>4g} {c.M:>5} {c.n:>3} {c.mean:>8.4f} {ref['mean']:>7} {c.mse:>8.4f} {ref['mse']:>7}"
              f"  {'yes' if chk['ok'] else 'NO'}")
        rows.append({**c.summary(), "check": chk})
    if args.json:
        with open(args.json, "w") as fh:
            json.dump({"config": vars(args), "cells": rows}, fh, indent=2)


if __name__ == "__main__":
    main()
