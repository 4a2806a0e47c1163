"""Posterior next-result distribution for a 12-3 arena player.

Observed runs: 12-0, 10-3, 6-3, 12-2.  The grid engine (K = 8192) is
cross-checked against composite Gauss-Legendre quadrature of the same
integrals with densities from the pointwise CDF recursion, and both are
printed next to the published row.
"""
import argparse
from pathlib import Path

import numpy as np

from arena_model import ArenaShape, State, occupancy_probability, predictive_result_distribution
from arena_model.arena import sources
from arena_model.fileio import read_history

DATA = Path(__file__).resolve().parent.parent / "data" / "hearthstone_12_3.txt"
SHAPE = ArenaShape(12, 3)
PUBLISHED = {"12-0": 3.0e-4, "12-1": 0.20, "12-2": 0.72, "11-3": 2.6e-2, "10-3": 5.5e-3,
             "9-3": 6.5e-4, "8-3": 4.2e-5, "7-3": 1.6e-6}


def gauss_legendre_reference(counts, panels=20000, order=50):
    t, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(0.0, 1.0, panels + 1)
    a, b = edges[:-1, None], edges[1:, None]
    u = ((b - a) * (t + 1) / 2 + a).ravel()
    wt = ((b - a) * w / 2).ravel()
    F, p = {State(0, 0): u}, {State(0, 0): np.ones_like(u)}
    for s in SHAPE.states[1:]:
        F[s], p[s] = np.zeros_like(u), np.zeros_like(u)
        for src, weight, won in sources(SHAPE, s):
            g, d = F[src], p[src]
            weight = float(weight)
            if won:
                F[s] += weight * g * g
                p[s] += weight * 2 * g * d
            else:
                F[s] += weight * (1 - (1 - g) ** 2)
                p[s] += weight * 2 * (1 - g) * d
    lik = np.ones_like(u)
    for s, c in counts.items():
        lik *= p[s] ** c
    z = wt @ lik
    return {s: float(occupancy_probability(SHAPE, s)) * float(wt @ (lik * p[s])) / z
            for s in SHAPE.boundary_states}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--grid-size", type=int, default=8192)
    args = ap.parse_args()
    counts = read_history(DATA, SHAPE)
    grid = predictive_result_distribution(SHAPE, counts, "grid", args.grid_size).as_floats()
    ref = gauss_legendre_reference(counts)
    print(f"{'result':>7} {'grid':>11} {'quadrature':>11} {'published':>10}")
    for s in SHAPE.boundary_states:
        pub = PUBLISHED.get(s.label())
        print(f"{s.label():>7} {grid[s]:>11.4g} {ref[s]:>11.4g} {'' if pub is None else f'{pub:.2g}':>10}")
    print(f"{'sum':>7} {sum(grid.values()):>11.6f} {sum(ref.values()):>11.6f} {sum(PUBLISHED.values()):>10.4f}")


if __name__ == "__main__":
    main()
