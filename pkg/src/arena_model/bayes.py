"""Bayesian prediction of a player's future states and results.

The original density doubles as the prior on a player's strength.  Under
that choice every transition probability is ``g_s(u)`` or ``1 - g_s(u)``
with ``u = F(strength)``, so posterior predictive probabilities are ratios
of polynomial integrals over [0, 1] and do not depend on the prior.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.integrate import trapezoid

from .arena import (
    ArenaShape,
    GridFunction,
    State,
    _as_shape,
    cdf_polynomials,
    conditional_result_polynomials,
    grid_recursion,
    occupancy_probability,
)
from .errors import EngineLimitError, ValidationError
from .ratpoly import RatPoly

EXACT_MAX_THRESHOLD_SUM = 10
EXACT_MAX_DEGREE = 200_000
DEFAULT_GRID_SIZE = 8192

_ONE = RatPoly.constant(1)
_START = State(0, 0)


def _step(shape: ArenaShape, prev: State, cur: State) -> tuple[State, bool] | None:
    """Classify one transition: None for a run restart, else (from_state, won)."""
    if shape.is_boundary(prev):
        if cur != _START:
            raise ValidationError(f"after result {prev.label()} the next state must be 0-0, got {cur.label()}")
        return None
    if cur == (prev.i + 1, prev.j):
        return prev, True
    if cur == (prev.i, prev.j + 1):
        return prev, False
    raise ValidationError(f"illegal transition {prev.label()} -> {cur.label()}")


def _steps(shape: ArenaShape, states: Sequence[State], prev: State | None = None):
    out = []
    for s in states:
        if prev is None:
            if s != _START:
                raise ValidationError(f"a trajectory must start at 0-0, got {s.label()}")
        else:
            st = _step(shape, prev, s)
            if st is not None:
                out.append(st)
        prev = s
    return out


@dataclass(frozen=True)
class RunHistory:
    """Consecutive states of one player, with 0-0 inserted at each run start."""

    shape: ArenaShape
    entries: tuple[State, ...] = ()

    def __post_init__(self):
        shape = _as_shape(self.shape)
        entries = tuple(shape.check_state(s) for s in self.entries)
        _steps(shape, entries)
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_outcomes(cls, shape, outcomes: Iterable[bool] | str) -> "RunHistory":
        """Build a history from round outcomes (True/'W' = win, False/'L' = loss)."""
        shape = _as_shape(shape)
        return cls(shape, tuple(extend_with_outcomes(shape, None, outcomes)))

    @property
    def last(self) -> State | None:
        return self.entries[-1] if self.entries else None

    def transitions(self) -> list[tuple[State, bool]]:
        return _steps(self.shape, self.entries)

    @property
    def result_counts(self) -> dict[State, int]:
        counts: dict[State, int] = {}
        for s in self.entries:
            if self.shape.is_boundary(s):
                counts[s] = counts.get(s, 0) + 1
        return counts

    def __add__(self, future: Sequence) -> "RunHistory":
        return RunHistory(self.shape, self.entries + tuple(State(*s) for s in future))


def _parse_outcome(o) -> bool:
    if isinstance(o, str):
        if o.upper() in ("W", "1"):
            return True
        if o.upper() in ("L", "0"):
            return False
        raise ValidationError(f"outcome must be W or L, got {o!r}")
    return bool(o)


def extend_with_outcomes(shape, last: State | None, outcomes: Iterable[bool] | str) -> list[State]:
    """States visited after ``last`` when the player plays ``outcomes``."""
    shape = _as_shape(shape)
    out: list[State] = []
    cur = last
    for o in outcomes:
        if cur is None or shape.is_boundary(cur):
            cur = _START
            out.append(cur)
        cur = State(cur.i + 1, cur.j) if _parse_outcome(o) else State(cur.i, cur.j + 1)
        out.append(cur)
    return out


def _likelihood(shape: ArenaShape, steps) -> RatPoly:
    g = cdf_polynomials(shape)
    acc = _ONE
    for src, won in steps:
        acc = acc * (g[src] if won else _ONE - g[src])
    return acc


@dataclass(frozen=True)
class Posterior:
    likelihood: RatPoly  # unnormalized posterior density on [0, 1]
    evidence: Fraction  # its integral
    density: RatPoly  # normalized


def posterior_density(shape, hist: RunHistory | Sequence) -> Posterior:
    """Posterior strength density given a trajectory, uniform original density."""
    shape = _as_shape(shape)
    if not isinstance(hist, RunHistory):
        hist = RunHistory(shape, tuple(hist))
    lik = _likelihood(shape, hist.transitions())
    z = lik.integrate()
    return Posterior(lik, z, lik / z)


def predictive_trajectory(shape, hist: RunHistory | Sequence, future: Sequence) -> Fraction:
    """Posterior probability that the next states are exactly ``future``.

    The value does not depend on the original density; it is a ratio of
    exact polynomial integrals.
    """
    shape = _as_shape(shape)
    if not isinstance(hist, RunHistory):
        hist = RunHistory(shape, tuple(hist))
    future = [shape.check_state(s) for s in future]
    past = hist.transitions()
    ahead = _steps(shape, future, hist.last)
    base = _likelihood(shape, past)
    num = (base * _likelihood(shape, ahead)).integrate()
    return num / base.integrate()


def predictive_trajectory_grid(shape, hist: RunHistory | Sequence, future: Sequence,
                               prior: GridFunction) -> float:
    """Same quantity by direct quadrature over strength under a gridded prior."""
    shape = _as_shape(shape)
    if not isinstance(hist, RunHistory):
        hist = RunHistory(shape, tuple(hist))
    future = [shape.check_state(s) for s in future]
    ahead = _steps(shape, future, hist.last)
    dens, cdfs = grid_recursion(shape, prior)
    x = prior.grid
    base = dens[_START].values.copy()
    for src, won in hist.transitions():
        F = cdfs[src].values
        base *= F if won else 1.0 - F
    num = base.copy()
    for src, won in ahead:
        F = cdfs[src].values
        num *= F if won else 1.0 - F
    return float(trapezoid(num, x) / trapezoid(base, x))


# ---------------------------------------------------------------------------
# result-count interface


@dataclass(frozen=True)
class ResultDistribution:
    shape: ArenaShape
    probs: dict[State, Fraction | float]
    engine: str = "exact"
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        vals = [float(v) for v in self.probs.values()]
        if any(v < -1e-12 for v in vals):
            raise ValidationError("negative probability in result distribution")
        if abs(sum(vals) - 1.0) > 1e-9:
            raise ValidationError(f"result probabilities sum to {sum(vals)!r}")

    def __getitem__(self, s) -> Fraction | float:
        return self.probs[State(*s)]

    def as_floats(self) -> dict[State, float]:
        return {s: float(v) for s, v in self.probs.items()}

    def total(self):
        return sum(self.probs.values())


def validate_counts(shape, counts: Mapping) -> dict[State, int]:
    shape = _as_shape(shape)
    out: dict[State, int] = {}
    for s, c in counts.items():
        s = shape.check_state(s)
        if not shape.is_boundary(s):
            raise ValidationError(f"{s.label()} is not a result of a {shape} arena")
        if isinstance(c, bool) or int(c) != c or c < 0:
            raise ValidationError(f"count for {s.label()} must be a nonnegative integer")
        if c:
            out[s] = out.get(s, 0) + int(c)
    return out


def _pick_engine(shape: ArenaShape, engine: str) -> str:
    if engine == "auto":
        return "exact" if shape.m + shape.n <= EXACT_MAX_THRESHOLD_SUM else "grid"
    if engine not in ("exact", "grid"):
        raise ValidationError(f"unknown engine {engine!r}")
    return engine


def _exact_likelihood(shape: ArenaShape, counts: dict[State, int]) -> tuple[dict, RatPoly]:
    if shape.m + shape.n > EXACT_MAX_THRESHOLD_SUM:
        raise EngineLimitError(
            f"exact engine limited to m + n <= {EXACT_MAX_THRESHOLD_SUM}; use the grid engine")
    polys = conditional_result_polynomials(shape)
    degree = sum(c * polys[s].degree for s, c in counts.items())
    if degree > EXACT_MAX_DEGREE:
        raise EngineLimitError(
            f"likelihood degree {degree} exceeds {EXACT_MAX_DEGREE}; use the grid engine")
    lik = _ONE
    for s, c in counts.items():
        lik = lik * polys[s] ** c
    return polys, lik


def _grid_likelihood(shape: ArenaShape, counts: dict[State, int], grid_size: int):
    prior = GridFunction.uniform(grid_size)
    dens = grid_recursion(shape, prior)[0]
    x = prior.grid
    with np.errstate(divide="ignore"):
        logl = np.zeros_like(x)
        for s, c in counts.items():
            logl = logl + c * np.log(dens[s].values)
    top = np.max(logl)
    if not np.isfinite(top):
        raise ValidationError("observed results have zero likelihood everywhere on the grid")
    lik = np.exp(logl - top)
    return x, dens, lik


def predictive_result_distribution(shape, result_counts: Mapping, engine: str = "auto",
                                   grid_size: int = DEFAULT_GRID_SIZE) -> ResultDistribution:
    """Posterior distribution of the next run's result given past result counts."""
    shape = _as_shape(shape)
    counts = validate_counts(shape, result_counts)
    engine = _pick_engine(shape, engine)
    if engine == "exact":
        polys, lik = _exact_likelihood(shape, counts)
        z = lik.integrate()
        probs = {s: (polys[s] * lik).integrate() / z for s in shape.boundary_states}
        return ResultDistribution(shape, probs, "exact")

    x, dens, lik = _grid_likelihood(shape, counts, grid_size)
    z = float(trapezoid(lik, x))
    probs = {
        s: float(occupancy_probability(shape, s)) * float(trapezoid(dens[s].values * lik, x)) / z
        for s in shape.boundary_states
    }
    return ResultDistribution(shape, probs, "grid", {"grid_size": grid_size})


def posterior_density_from_counts(shape, result_counts: Mapping, points, engine: str = "auto",
                                  grid_size: int = DEFAULT_GRID_SIZE) -> np.ndarray:
    """Normalized posterior strength density (uniform original density) at ``points``."""
    shape = _as_shape(shape)
    counts = validate_counts(shape, result_counts)
    points = np.asarray(points, dtype=float)
    if _pick_engine(shape, engine) == "exact":
        _, lik = _exact_likelihood(shape, counts)
        return np.asarray(lik.evaluate(points), dtype=float) / float(lik.integrate())
    x, _, lik = _grid_likelihood(shape, counts, grid_size)
    return np.interp(points, x, lik / trapezoid(lik, x))


def empirical_result_distribution(shape, result_counts: Mapping) -> dict[State, float]:
    """Plain relative frequencies of past results (the sample-mean baseline)."""
    shape = _as_shape(shape)
    counts = validate_counts(shape, result_counts)
    total = sum(counts.values())
    if total == 0:
        return {s: 0.0 for s in shape.boundary_states}
    return {s: counts.get(s, 0) / total for s in shape.boundary_states}
