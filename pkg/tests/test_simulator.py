from collections import Counter

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.stats import chisquare, norm

from arena_model import (
    ArenaShape,
    Matching,
    State,
    ValidationError,
    occupancy_probability,
    play_runs,
    random_matching,
    simulate_1v1_fluctuations,
    simulate_arena_game,
)
from arena_model.simulator import conditional_win_indicators, make_rng, normal_sampler


class TestMatching:
    @given(st.integers(1, 200).map(lambda k: 2 * k), st.integers(0, 2 ** 32))
    def test_is_perfect_matching(self, M, seed):
        mt = random_matching(M, seed)
        p = mt.partner
        assert np.all(p[p] == np.arange(M)) and np.all(p != np.arange(M))
        assert sorted(mt.pairs().ravel().tolist()) == list(range(M))

    def test_uniform_over_matchings(self):
        rng = make_rng(4)
        seen = Counter(tuple(map(tuple, random_matching(4, rng).pairs())) for _ in range(6000))
        assert len(seen) == 3
        assert chisquare(list(seen.values())).pvalue > 1e-3

    @pytest.mark.parametrize("M", [0, 1, 3, 2.5])
    def test_rejects_odd(self, M):
        with pytest.raises(ValidationError):
            random_matching(M, 0)

    def test_rejects_non_involution(self):
        with pytest.raises(ValidationError):
            Matching(np.array([1, 2, 0, 3]))


class TestArenaGame:
    @pytest.mark.parametrize("m,n,extra", [(2, 2, 0), (5, 1, 2), (3, 3, 1), (4, 2, -1)])
    def test_results_follow_occupancy_exactly(self, m, n, extra):
        # cohorts always split in half, so counts equal N * occupancy exactly
        shape = ArenaShape(m, n)
        log = simulate_arena_game(shape, extra, rng=1)
        N = log.strengths.size
        freq = log.result_frequencies()
        for s in shape.boundary_states:
            assert freq[s] == occupancy_probability(shape, s) * N

    def test_log_is_consistent(self):
        shape = ArenaShape(3, 2)
        log = simulate_arena_game(shape, 1, rng=2)
        last = {}
        for rec in log.records():
            assert rec.state_before == last.get(rec.player, State(0, 0))
            last[rec.player] = rec.state_after
        assert [last[p] for p in range(log.strengths.size)] == log.result_states()
        # within a round, opponents share a state and exactly half win
        for r in range(shape.m + shape.n - 1):
            sel = log.round == r
            assert log.won[sel].sum() * 2 == sel.sum()

    def test_strongest_and_weakest(self):
        shape = ArenaShape(3, 2)
        log = simulate_arena_game(shape, 2, normal_sampler, rng=3)
        res = log.result_states()
        assert res[int(np.argmax(log.strengths))] == State(3, 0)
        assert res[int(np.argmin(log.strengths))] == State(0, 2)

    def test_repeated_runs(self):
        log = play_runs((2, 2), np.arange(16.0), runs=3, rng=0)
        assert log.results.shape == (16, 3)
        assert set(log.run.tolist()) == {0, 1, 2}
        for q in range(3):
            assert log.result_states(q)[15] == State(2, 0)

    @pytest.mark.parametrize("N", [6, 4, 1])
    def test_rejects_bad_player_counts(self, N):
        with pytest.raises(ValidationError):
            play_runs((2, 2), np.zeros(N), rng=0)

    def test_deterministic(self):
        a = simulate_arena_game((3, 3), 0, rng=9)
        b = simulate_arena_game((3, 3), 0, rng=9)
        assert np.array_equal(a.strengths, b.strengths) and np.array_equal(a.won, b.won)


class TestFluctuations:
    @given(st.integers(1, 64).map(lambda k: 2 * k), st.integers(1, 10),
           st.floats(0, 8), st.integers(0, 2 ** 32))
    def test_finite_columns_balanced(self, M, n, rho, seed):
        A = simulate_1v1_fluctuations(M, n, rho, "finite", seed)
        assert A.entries.shape == (M, n)
        assert np.all(A.column_sums() * 2 == M)

    def test_no_fluctuations_ranks_by_strength(self):
        A = simulate_1v1_fluctuations(2, 30, 0.0, "finite", 1)
        assert set(A.wins().tolist()) == {0, 30}

    def test_seed_reproducible(self):
        a = simulate_1v1_fluctuations(64, 5, 1.3, "infinite", 8).entries
        b = simulate_1v1_fluctuations(64, 5, 1.3, "infinite", 8).entries
        assert np.array_equal(a, b)

    @pytest.mark.parametrize("strength,rho", [(0.0, 1.0), (1.0, 0.5), (-0.7, 2.0)])
    def test_conditional_win_rate(self, strength, rho):
        # P(win | x) = Phi(x / sqrt(1 + rho^2)) against a fresh N(0,1) opponent
        k = 200_000
        w = conditional_win_indicators(strength, k, rho, 13)
        p = norm.cdf(strength / np.sqrt(1 + rho ** 2))
        assert abs(w.mean() - p) < 4 * np.sqrt(p * (1 - p) / k)

    @pytest.mark.parametrize("kwargs", [
        dict(M=3, n=4, rho=1.0), dict(M=4, n=0, rho=1.0), dict(M=4, n=4, rho=-1.0),
        dict(M=4, n=4, rho=1.0, population="other"),
    ])
    def test_rejects_bad_config(self, kwargs):
        with pytest.raises(ValidationError):
            simulate_1v1_fluctuations(**kwargs, rng=0)
