"""Seeded Monte Carlo simulation of arena games and 1-1 arenas with fluctuations.

Randomness comes from ``numpy.random.Generator`` (PCG64, 128-bit state).
Callers pass a seed, a ``SeedSequence`` or a ready generator; independent
substreams for replications are spawned from one ``SeedSequence``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from .arena import ArenaShape, State, _as_shape
from .errors import ValidationError

Sampler = Callable[[np.random.Generator, int], np.ndarray]


def make_rng(seed=None) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, np.random.SeedSequence):
        return np.random.Generator(np.random.PCG64(seed))
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def uniform_sampler(rng: np.random.Generator, size: int) -> np.ndarray:
    return rng.random(size)


def normal_sampler(rng: np.random.Generator, size: int) -> np.ndarray:
    return rng.standard_normal(size)


# ---------------------------------------------------------------------------
# matching


@dataclass(frozen=True, eq=False)
class Matching:
    """Fixed-point-free involution on 0..M-1: ``partner[a]`` is a's opponent."""

    partner: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.partner)
        idx = np.arange(p.size)
        if p.size % 2 or np.any(p == idx) or np.any(p[p] != idx):
            raise ValidationError("partner array is not a perfect matching")

    def pairs(self) -> np.ndarray:
        """(M/2, 2) array of pairs with the smaller index first."""
        a = np.flatnonzero(self.partner > np.arange(self.partner.size))
        return np.column_stack([a, self.partner[a]])


def _pair_up(order: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    return order[0::2], order[1::2]


def random_matching(M: int, rng=None) -> Matching:
    """Uniformly random perfect matching: shuffle, then pair neighbours."""
    if isinstance(M, bool) or int(M) != M or M < 2 or M % 2:
        raise ValidationError(f"random matching needs an even M >= 2, got {M!r}")
    rng = make_rng(rng)
    a, b = _pair_up(rng.permutation(int(M)))
    partner = np.empty(int(M), dtype=np.int64)
    partner[a] = b
    partner[b] = a
    return Matching(partner)


def _duel(x_a: np.ndarray, x_b: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """True where side a wins; exact ties are settled by a fair coin."""
    wins = x_a > x_b
    ties = np.flatnonzero(x_a == x_b)
    if ties.size:
        wins[ties] = rng.random(ties.size) < 0.5
    return wins


# ---------------------------------------------------------------------------
# arena games without fluctuations


@dataclass(frozen=True)
class MatchRecord:
    player: int
    round: int
    run: int
    state_before: State
    won: bool

    @property
    def state_after(self) -> State:
        i, j = self.state_before
        return State(i + 1, j) if self.won else State(i, j + 1)


@dataclass(frozen=True, eq=False)
class GameLog:
    """Columnar log of every match played, plus final results per run.

    ``results[p, q]`` indexes ``shape.boundary_states`` for player p's q-th run.
    """

    shape: ArenaShape
    strengths: np.ndarray
    player: np.ndarray
    round: np.ndarray
    run: np.ndarray
    i: np.ndarray
    j: np.ndarray
    won: np.ndarray
    results: np.ndarray

    def __len__(self) -> int:
        return self.player.size

    def records(self) -> Iterator[MatchRecord]:
        for k in range(self.player.size):
            yield MatchRecord(int(self.player[k]), int(self.round[k]), int(self.run[k]),
                              State(int(self.i[k]), int(self.j[k])), bool(self.won[k]))

    def result_states(self, run: int = 0) -> list[State]:
        bs = self.shape.boundary_states
        return [bs[k] for k in self.results[:, run]]

    def result_frequencies(self, run: int = 0) -> dict[State, int]:
        counts = np.bincount(self.results[:, run], minlength=self.shape.m + self.shape.n)
        return {s: int(c) for s, c in zip(self.shape.boundary_states, counts)}


def _boundary_index(shape: ArenaShape, i: np.ndarray, j: np.ndarray) -> np.ndarray:
    # boundary_states order: (m,0..n-1) then (m-1..0, n)
    return np.where(i == shape.m, j, shape.n + (shape.m - 1 - i))


def play_runs(shape, strengths: np.ndarray, runs: int = 1, rng=None, *, log: bool = True) -> GameLog:
    """Play ``runs`` consecutive arena games among players of fixed strength.

    Each round pairs players within a state cohort uniformly at random; the
    stronger player always wins.  The player count must keep every cohort
    even, which holds for powers of two at least 2**(m+n-1).
    """
    shape = _as_shape(shape)
    rng = make_rng(rng)
    x = np.asarray(strengths, dtype=float)
    N = x.size
    if N < 2 or N & (N - 1) or N < 2 ** (shape.m + shape.n - 1):
        raise ValidationError(
            f"{N} players: need a power of two >= 2**(m+n-1) = {2 ** (shape.m + shape.n - 1)}")
    m, n = shape.m, shape.n
    results = np.empty((N, runs), dtype=np.int64)
    cols: dict[str, list[np.ndarray]] = {k: [] for k in ("player", "round", "run", "i", "j", "won")}
    for q in range(runs):
        i = np.zeros(N, dtype=np.int64)
        j = np.zeros(N, dtype=np.int64)
        for r in range(m + n - 1):
            active = np.flatnonzero((i < m) & (j < n))
            if active.size == 0:
                break
            # uniform shuffle, then a stable sort by state keeps each cohort's order random
            active = active[rng.permutation(active.size)]
            active = active[np.argsort(i[active], kind="stable")]
            key = i[active]
            a, b = _pair_up(active)
            if active.size % 2 or np.any(key[0::2] != key[1::2]):
                raise RuntimeError(f"odd cohort in round {r}; player count does not fit {shape}")
            a_wins = _duel(x[a], x[b], rng)
            if log:
                players = np.concatenate([a, b])
                cols["player"].append(players)
                cols["round"].append(np.full(players.size, r))
                cols["run"].append(np.full(players.size, q))
                cols["i"].append(i[players])
                cols["j"].append(j[players])
                cols["won"].append(np.concatenate([a_wins, ~a_wins]))
            winners = np.concatenate([a[a_wins], b[~a_wins]])
            losers = np.concatenate([a[~a_wins], b[a_wins]])
            i[winners] += 1
            j[losers] += 1
        if np.any((i < m) & (j < n)):
            raise RuntimeError("some players did not reach a result")
        results[:, q] = _boundary_index(shape, i, j)

    def cat(k, dtype):
        return np.concatenate(cols[k]).astype(dtype) if cols[k] else np.empty(0, dtype)

    return GameLog(shape, x, cat("player", np.int64), cat("round", np.int64), cat("run", np.int64),
                   cat("i", np.int64), cat("j", np.int64), cat("won", bool), results)


def simulate_arena_game(shape, log2_extra: int = 0, prior_sampler: Sampler = uniform_sampler,
                        rng=None, *, log: bool = True) -> GameLog:
    """One arena game among 2**(m+n+log2_extra) players with sampled strengths."""
    shape = _as_shape(shape)
    rng = make_rng(rng)
    N = 2 ** (shape.m + shape.n + int(log2_extra))
    return play_runs(shape, prior_sampler(rng, N), 1, rng, log=log)


# ---------------------------------------------------------------------------
# 1-1 arena with uniform fluctuations


@dataclass(frozen=True, eq=False)
class WinLossMatrix:
    """Binary players x rounds matrix; entry 1 means the player won that round."""

    entries: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.entries)
        if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
            raise ValidationError("win-loss matrix must be a non-empty 2-d array")
        if not np.all((a == 0) | (a == 1)):
            raise ValidationError("win-loss matrix entries must be 0 or 1")
        a = a.astype(np.uint8)
        a.flags.writeable = False
        object.__setattr__(self, "entries", a)

    @property
    def M(self) -> int:
        return self.entries.shape[0]

    @property
    def n(self) -> int:
        return self.entries.shape[1]

    def wins(self) -> np.ndarray:
        return self.entries.sum(axis=1, dtype=np.int64)

    def column_sums(self) -> np.ndarray:
        return self.entries.sum(axis=0, dtype=np.int64)


def simulate_1v1_fluctuations(M: int, n: int, rho: float, population: str = "finite",
                              rng=None) -> WinLossMatrix:
    """Win-loss matrix of a 1-1 arena where performance = strength + rho/sqrt(2) * noise.

    Strengths are N(0, 1) and fixed for the whole simulation.  ``finite``
    pairs the M players by a fresh random matching every round;
    ``infinite`` gives each player a new independent N(0, 1) opponent every
    round, i.e. no opponent is ever met twice.
    """
    if rho < 0 or not np.isfinite(rho):
        raise ValidationError(f"rho must be a finite nonnegative number, got {rho}")
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ValidationError(f"rounds must be a positive integer, got {n!r}")
    if population not in ("finite", "infinite"):
        raise ValidationError(f"population must be 'finite' or 'infinite', got {population!r}")
    if population == "finite" and (int(M) != M or M < 2 or M % 2):
        raise ValidationError(f"finite population needs an even M >= 2, got {M!r}")
    if population == "infinite" and (int(M) != M or M < 1):
        raise ValidationError(f"M must be a positive integer, got {M!r}")
    rng = make_rng(rng)
    M, n = int(M), int(n)
    scale = rho / np.sqrt(2.0)
    x = rng.standard_normal(M)
    out = np.empty((M, n), dtype=np.uint8)
    for k in range(n):
        if population == "finite":
            a, b = _pair_up(rng.permutation(M))
            perf = x + scale * rng.standard_normal(M)
            a_wins = _duel(perf[a], perf[b], rng)
            out[a, k] = a_wins
            out[b, k] = ~a_wins
        else:
            own = x + scale * rng.standard_normal(M)
            opp = rng.standard_normal(M) + scale * rng.standard_normal(M)
            out[:, k] = _duel(own, opp, rng)
    return WinLossMatrix(out)


def conditional_win_indicators(strength: float, rounds: int, rho: float, rng=None) -> np.ndarray:
    """Round outcomes of one player of known strength against fresh opponents."""
    rng = make_rng(rng)
    scale = rho / np.sqrt(2.0)
    own = strength + scale * rng.standard_normal(rounds)
    opp = rng.standard_normal(rounds) + scale * rng.standard_normal(rounds)
    return _duel(own, opp, rng)
