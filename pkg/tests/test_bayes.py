import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from arena_model import (
    ArenaShape,
    GridFunction,
    RunHistory,
    State,
    ValidationError,
    empirical_result_distribution,
    occupancy_probability,
    posterior_density,
    posterior_density_from_counts,
    predictive_result_distribution,
    predictive_trajectory,
    predictive_trajectory_grid,
)
from arena_model.bayes import extend_with_outcomes
from arena_model.errors import EngineLimitError

from oracles import direct_predictive, triangular_prior

FIFA = ArenaShape(5, 1)


def fifa_counts(codes):
    out = {}
    for c in codes:
        s = State(5, 0) if c == 5 else State(c, 1)
        out[s] = out.get(s, 0) + 1
    return out


class TestRunHistory:
    def test_from_outcomes_inserts_run_starts(self):
        h = RunHistory.from_outcomes((2, 1), "WWLWL")
        assert [s.label() for s in h.entries] == ["0-0", "1-0", "2-0", "0-0", "0-1", "0-0", "1-0", "1-1"]
        assert h.result_counts == {State(2, 0): 1, State(0, 1): 1, State(1, 1): 1}
        assert h.transitions() == [(State(0, 0), True), (State(1, 0), True), (State(0, 0), False),
                                   (State(0, 0), True), (State(1, 0), False)]

    @pytest.mark.parametrize("entries", [
        [(1, 0)],  # does not start at 0-0
        [(0, 0), (1, 1)],  # skips a round
        [(0, 0), (1, 0), (2, 0), (2, 1)],  # continues after a result
    ])
    def test_rejects_illegal_trajectories(self, entries):
        with pytest.raises(ValidationError):
            RunHistory((2, 2), tuple(State(*e) for e in entries))

    def test_bad_outcome_symbol(self):
        with pytest.raises(ValidationError):
            RunHistory.from_outcomes((2, 2), "WX")

    def test_extend_continues_open_run(self):
        assert extend_with_outcomes((2, 2), State(1, 0), "L") == [State(1, 1)]


class TestTrajectoryPredictive:
    @given(st.integers(0, 12), st.integers(0, 12))
    def test_laplace_rule(self, w, l):
        # all rounds at 0-0 in a 1-1 arena: Beta(w+1, l+1) posterior
        hist = RunHistory.from_outcomes((1, 1), "W" * w + "L" * l)
        assert predictive_trajectory((1, 1), hist, [State(0, 0), State(1, 0)]) == Fraction(w + 1, w + l + 2)

    def test_prior_predictive_is_occupancy(self):
        shape = ArenaShape(3, 2)
        for s in shape.boundary_states:
            path = extend_with_outcomes(shape, None, "W" * s.i + "L" * s.j)
            p_any_order = occupancy_probability(shape, s)
            assert predictive_trajectory(shape, [], path) <= p_any_order

    def test_future_probabilities_sum_to_one(self):
        shape = ArenaShape(2, 2)
        hist = RunHistory.from_outcomes(shape, "WWLLWL")
        total = sum(predictive_trajectory(shape, hist, extend_with_outcomes(shape, hist.last, seq))
                    for seq in ("WW", "WL", "LW", "LL"))
        assert total == 1

    def test_posterior_normalized(self):
        post = posterior_density((3, 3), RunHistory.from_outcomes((3, 3), "WLWWLL"))
        assert post.density.integrate() == 1

    def test_prior_invariance_randomized(self):
        pdf, cdf = triangular_prior()
        rng = random.Random(5)
        for _ in range(25):
            m, n = rng.randint(1, 3), rng.randint(1, 3)
            hist = RunHistory.from_outcomes((m, n), [rng.random() < 0.5 for _ in range(rng.randint(0, 8))])
            future = extend_with_outcomes((m, n), hist.last, [rng.random() < 0.5 for _ in range(rng.randint(1, 3))])
            exact = predictive_trajectory((m, n), hist, future)
            ahead = RunHistory((m, n), hist.entries + tuple(future)).transitions()[len(hist.transitions()):]
            direct = direct_predictive(m, n, hist.transitions(), ahead, pdf, cdf)
            assert abs(float(exact) - direct) < 1e-9

    def test_grid_quadrature_under_normal_prior(self):
        shape = ArenaShape(3, 2)
        hist = RunHistory.from_outcomes(shape, "WWLWLLW")
        fut = extend_with_outcomes(shape, hist.last, "WL")
        exact = float(predictive_trajectory(shape, hist, fut))
        approx = predictive_trajectory_grid(shape, hist, fut, GridFunction.normal(16385))
        assert abs(exact - approx) < 1e-6


class TestResultDistribution:
    def test_empty_history_gives_occupancy(self):
        shape = ArenaShape(3, 3)
        dist = predictive_result_distribution(shape, {})
        assert dist.probs == {s: occupancy_probability(shape, s) for s in shape.boundary_states}

    @given(st.dictionaries(st.integers(0, 5), st.integers(0, 4), max_size=6))
    def test_exact_sums_to_one(self, raw):
        counts = {(State(5, 0) if c == 5 else State(c, 1)): k for c, k in raw.items()}
        assert predictive_result_distribution(FIFA, counts).total() == 1

    def test_brazil(self):
        dist = predictive_result_distribution(FIFA, fifa_counts([3, 3, 2, 5, 5, 3, 2, 5, 5, 2]))
        p = [float(dist[(c, 1)]) if c < 5 else float(dist[(5, 0)]) for c in range(6)]
        np.testing.assert_allclose(p, [0.040, 0.074, 0.130, 0.199, 0.243, 0.314], atol=0.01)

    def test_single_result_matches_hand_integral(self):
        # one observed champion: likelihood x^31, P(next champion) = (1/63) / (1/32)
        dist = predictive_result_distribution(FIFA, {(5, 0): 1})
        assert dist[(5, 0)] == Fraction(32, 63)

    def test_engines_agree(self):
        shape = ArenaShape(4, 3)
        counts = {(4, 1): 2, (2, 3): 1, (0, 3): 1, (4, 0): 1}
        exact = predictive_result_distribution(shape, counts, "exact").as_floats()
        grid = predictive_result_distribution(shape, counts, "grid", 8192).as_floats()
        for s in shape.boundary_states:
            assert abs(exact[s] - grid[s]) < 1e-6

    def test_auto_engine(self):
        assert predictive_result_distribution((5, 1), {}).engine == "exact"
        assert predictive_result_distribution((12, 3), {}, grid_size=2049).engine == "grid"

    def test_engine_limits(self):
        with pytest.raises(EngineLimitError):
            predictive_result_distribution((12, 3), {(12, 0): 1}, engine="exact")
        with pytest.raises(ValidationError):
            predictive_result_distribution((5, 1), {}, engine="magic")

    def test_rejects_non_results(self):
        with pytest.raises(ValidationError):
            predictive_result_distribution((5, 1), {(2, 0): 1})
        with pytest.raises(ValidationError):
            predictive_result_distribution((5, 1), {(5, 0): -1})

    def test_baseline_frequencies(self):
        emp = empirical_result_distribution(FIFA, {(5, 0): 3, (0, 1): 1})
        assert emp[State(5, 0)] == 0.75 and emp[State(3, 1)] == 0.0

    def test_posterior_density_integrates(self):
        xs = np.linspace(0, 1, 2001)
        counts = {(5, 0): 2, (2, 1): 1}
        for engine in ("exact", "grid"):
            d = posterior_density_from_counts(FIFA, counts, xs, engine)
            assert abs(np.trapezoid(d, xs) - 1) < 1e-3
