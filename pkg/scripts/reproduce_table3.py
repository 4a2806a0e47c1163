"""Posterior next-result distribution for four World Cup teams (5-1 arena).

Prints, per team, the model prediction (exact integration), the sample
frequency baseline and the realised frequencies of the held-out editions.
"""
from pathlib import Path

from arena_model import ArenaShape, State, empirical_result_distribution, predictive_result_distribution
from arena_model.fileio import read_history

DATA = Path(__file__).resolve().parent.parent / "data" / "fifa"
SHAPE = ArenaShape(5, 1)
ORDER = [State(0, 1), State(1, 1), State(2, 1), State(3, 1), State(4, 1), State(5, 0)]

# held-out editions 1934, 1950, ..., 2014 coded the same way
TEST_CODES = {
    "brazil": [1, 4, 5, 1, 3, 2, 1, 4, 2, 3],
    "italy": [5, 2, 0, 1, 1, 5, 3, 2, 5, 0],
    "argentina": [1, 0, 1, 2, 2, 1, 4, 2, 2, 4],
    "sweden": [2, 3, 4, 0, 2, 0, 0, 0, 1, 0],
}


def main():
    print(f"{'code':>4} " + " ".join(f"{t:>24}" for t in TEST_CODES))
    print(f"{'':>4} " + " ".join(f"{'held-out  model  sample':>24}" for _ in TEST_CODES))
    cols = {}
    for team, test in TEST_CODES.items():
        counts = read_history(DATA / f"{team}.txt", SHAPE, fifa=True)
        model = predictive_result_distribution(SHAPE, counts, engine="exact")
        base = empirical_result_distribution(SHAPE, counts)
        cols[team] = [(test.count(c) / len(test), float(model[s]), base[s]) for c, s in enumerate(ORDER)]
    for c in range(6):
        print(f"{c:>4} " + " ".join(f"{f:>10.1f} {p:>6.3f} {b:>6.1f}" for f, p, b in (cols[t][c] for t in cols)))


if __name__ == "__main__":
    main()
