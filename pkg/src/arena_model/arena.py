"""State lattice of an m-n arena and the strength-distribution recursions.

A player starts a run at (0, 0) and is paired each round with someone in
the same state; the stronger player moves to (i+1, j), the weaker one to
(i, j+1).  The run ends on reaching m wins or n losses.

Two engines compute the distribution of strength at each state:

* exact: uniform original density, polynomials with rational coefficients
  (``cdf_polynomials`` / ``uniform_densities``);
* grid: any compactly supported density sampled on an equally spaced grid
  (``density_recursion_grid``).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Callable, NamedTuple

import numpy as np
from scipy.integrate import cumulative_trapezoid, trapezoid

from .errors import NumericDomainError, ValidationError
from .ratpoly import RatPoly


class State(NamedTuple):
    i: int  # wins
    j: int  # losses

    def label(self) -> str:
        return f"{self.i}-{self.j}"


@dataclass(frozen=True)
class ArenaShape:
    """Win threshold ``m`` and loss threshold ``n``."""

    m: int
    n: int

    def __post_init__(self):
        for name in ("m", "n"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or isinstance(v, bool) or v < 1:
                raise ValidationError(f"{name} must be a positive integer, got {v!r}")

    @classmethod
    def parse(cls, text: str) -> "ArenaShape":
        """Parse ``"m,n"`` or ``"m-n"``."""
        parts = text.replace("-", ",").split(",")
        try:
            m, n = (int(p) for p in parts)
        except ValueError:
            raise ValidationError(f"shape must look like 'm,n', got {text!r}") from None
        return cls(m, n)

    def __str__(self) -> str:
        return f"{self.m}-{self.n}"

    def contains(self, s) -> bool:
        i, j = s
        return 0 <= i <= self.m and 0 <= j <= self.n and (i, j) != (self.m, self.n)

    def is_boundary(self, s) -> bool:
        i, j = s
        return i == self.m or j == self.n

    def check_state(self, s) -> State:
        if not self.contains(s):
            raise ValidationError(f"state {tuple(s)} is not in the {self} lattice")
        return State(*s)

    @property
    def states(self) -> list[State]:
        """All lattice states ordered by round (i + j), then by wins."""
        out = []
        for r in range(self.m + self.n):
            for i in range(min(r, self.m), -1, -1):
                j = r - i
                if j <= self.n and (i, j) != (self.m, self.n):
                    out.append(State(i, j))
        return out

    @property
    def boundary_states(self) -> list[State]:
        """Results ordered best to worst: (m,0), ..., (m,n-1), (m-1,n), ..., (0,n)."""
        return [State(self.m, j) for j in range(self.n)] + [
            State(i, self.n) for i in range(self.m - 1, -1, -1)
        ]

    @property
    def interior_states(self) -> list[State]:
        return [s for s in self.states if not self.is_boundary(s)]


def _as_shape(shape) -> ArenaShape:
    if isinstance(shape, ArenaShape):
        return shape
    return ArenaShape(*shape)


def occupancy_probability(shape, s) -> Fraction:
    """Probability that a player reaches state ``s`` during a run."""
    shape = _as_shape(shape)
    i, j = shape.check_state(s)
    if i == shape.m:
        return Fraction(comb(shape.m + j - 1, shape.m - 1), 2 ** (shape.m + j))
    if j == shape.n:
        return Fraction(comb(shape.n + i - 1, shape.n - 1), 2 ** (shape.n + i))
    return Fraction(comb(i + j, i), 2 ** (i + j))


def result_probabilities(shape) -> dict[State, Fraction]:
    """Occupancy probabilities of every boundary state (they sum to 1)."""
    shape = _as_shape(shape)
    return {s: occupancy_probability(shape, s) for s in shape.boundary_states}


def sources(shape: ArenaShape, s) -> list[tuple[State, Fraction, bool]]:
    """Predecessors of ``s`` as ``(state, population share, arrived_by_win)``.

    Boundary states have a single source; streak states (i = 0 or j = 0)
    fall out of the general rule because the absent side gets weight 0.
    """
    i, j = s
    if (i, j) == (0, 0):
        return []
    if i == shape.m:
        return [(State(i - 1, j), Fraction(1), True)]
    if j == shape.n:
        return [(State(i, j - 1), Fraction(1), False)]
    out = []
    if i > 0:
        out.append((State(i - 1, j), Fraction(i, i + j), True))
    if j > 0:
        out.append((State(i, j - 1), Fraction(j, i + j), False))
    return out


_ONE = RatPoly.constant(1)


@lru_cache(maxsize=32)
def _cdf_polys(m: int, n: int) -> tuple[tuple[State, RatPoly], ...]:
    shape = ArenaShape(m, n)
    g: dict[State, RatPoly] = {State(0, 0): RatPoly.identity()}
    for s in shape.states[1:]:
        acc = RatPoly()
        for src, w, won in sources(shape, s):
            h = g[src]
            acc = acc + w * (h * h if won else _ONE - (_ONE - h) * (_ONE - h))
        g[s] = acc
    return tuple(g.items())


def cdf_polynomials(shape) -> dict[State, RatPoly]:
    """Polynomials g with F_s(x) = g_s(F(x)) for every state s."""
    shape = _as_shape(shape)
    return dict(_cdf_polys(shape.m, shape.n))


def uniform_densities(shape) -> dict[State, RatPoly]:
    """Strength densities at each state when the original density is U(0, 1)."""
    return {s: g.derivative() for s, g in cdf_polynomials(shape).items()}


def conditional_result_polynomials(shape) -> dict[State, RatPoly]:
    """P(result = s | X = x) as a polynomial in x, uniform original density.

    Equal to occupancy(s) * p_s(x); these sum to 1 identically.
    """
    shape = _as_shape(shape)
    dens = uniform_densities(shape)
    return {s: dens[s] * occupancy_probability(shape, s) for s in shape.boundary_states}


# ---------------------------------------------------------------------------
# grid engine


@dataclass(frozen=True, eq=False)
class GridFunction:
    """A density or CDF sampled on equally spaced abscissae."""

    grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if grid.ndim != 1 or grid.shape != values.shape or grid.size < 2:
            raise ValidationError("grid and values must be 1-d arrays of equal length >= 2")
        steps = np.diff(grid)
        if np.any(steps <= 0) or not np.allclose(steps, steps[0], rtol=1e-9, atol=0):
            raise ValidationError("grid must be strictly increasing and equally spaced")
        grid.flags.writeable = False
        values.flags.writeable = False
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_function(cls, f: Callable[[np.ndarray], np.ndarray], a: float, b: float,
                      K: int = 8192) -> "GridFunction":
        x = np.linspace(a, b, K + 1)
        return cls(x, np.broadcast_to(f(x), x.shape))

    @classmethod
    def uniform(cls, K: int = 8192) -> "GridFunction":
        return cls.from_function(np.ones_like, 0.0, 1.0, K)

    @classmethod
    def normal(cls, K: int = 8192, half_width: float = 8.0) -> "GridFunction":
        """Standard normal density truncated to [-half_width, half_width]."""
        return cls.from_function(
            lambda x: np.exp(-0.5 * x * x) / np.sqrt(2 * np.pi), -half_width, half_width, K)

    @property
    def K(self) -> int:
        return self.grid.size - 1

    @property
    def support(self) -> tuple[float, float]:
        return float(self.grid[0]), float(self.grid[-1])

    def integral(self) -> float:
        return float(trapezoid(self.values, self.grid))

    def cumulative(self) -> "GridFunction":
        return GridFunction(self.grid, cumulative_trapezoid(self.values, self.grid, initial=0.0))

    def __call__(self, x):
        return np.interp(x, self.grid, self.values)


def _check_prior(prior: GridFunction, atol: float) -> None:
    if np.any(prior.values < 0) or not np.all(np.isfinite(prior.values)):
        raise ValidationError("prior density has negative or non-finite values")
    total = prior.integral()
    if abs(total - 1.0) > atol:
        raise ValidationError(f"prior density integrates to {total:.9g}, not 1")


def grid_recursion(shape, prior_pdf: GridFunction, *, atol: float = 1e-6
                   ) -> tuple[dict[State, GridFunction], dict[State, GridFunction]]:
    """Densities and CDFs of strength at every state, on the prior's grid.

    Only the prior CDF is obtained by cumulative trapezoid integration.  The
    running integrals needed at later states are carried along as CDFs
    (F_win = F^2, F_loss = 1 - (1 - F)^2), so quadrature error does not
    compound through the lattice.
    """
    shape = _as_shape(shape)
    _check_prior(prior_pdf, atol)
    x = prior_pdf.grid
    p0 = prior_pdf.values / prior_pdf.integral()
    F0 = cumulative_trapezoid(p0, x, initial=0.0)
    F0 = np.clip(F0 / F0[-1], 0.0, 1.0)

    dens = {State(0, 0): p0}
    cdfs = {State(0, 0): F0}
    for s in shape.states[1:]:
        p = np.zeros_like(x)
        F = np.zeros_like(x)
        for src, w, won in sources(shape, s):
            ps, Fs = dens[src], cdfs[src]
            w = float(w)
            if won:
                p += w * 2.0 * ps * Fs
                F += w * Fs * Fs
            else:
                p += w * 2.0 * ps * (1.0 - Fs)
                F += w * (1.0 - (1.0 - Fs) ** 2)
        dens[s] = p
        cdfs[s] = F
    return ({s: GridFunction(x, v) for s, v in dens.items()},
            {s: GridFunction(x, v) for s, v in cdfs.items()})


def density_recursion_grid(shape, prior_pdf: GridFunction, *, atol: float = 1e-6
                           ) -> dict[State, GridFunction]:
    """Strength density at each state for an arbitrary gridded original density."""
    return grid_recursion(shape, prior_pdf, atol=atol)[0]


def arena_rv_pmf(shape, lam, prior: GridFunction | None = None) -> dict[State, float | Fraction]:
    """Distribution of the result of one run for a player of strength ``lam``.

    With ``prior=None`` the original density is U(0, 1) and the exact
    polynomials are used; ``lam`` given as int/Fraction yields exact output.
    """
    shape = _as_shape(shape)
    if prior is None:
        if not 0 <= lam <= 1:
            raise NumericDomainError(f"strength {lam} is outside the support [0, 1]")
        polys = conditional_result_polynomials(shape)
        if isinstance(lam, (int, Fraction)):
            return {s: polys[s](Fraction(lam)) for s in shape.boundary_states}
        return {s: float(polys[s].evaluate(float(lam))) for s in shape.boundary_states}

    a, b = prior.support
    if not a <= lam <= b:
        raise NumericDomainError(f"strength {lam} is outside the support [{a}, {b}]")
    dens = density_recursion_grid(shape, prior)
    base = float(dens[State(0, 0)](lam))
    if base <= 0:
        raise NumericDomainError(f"original density vanishes at strength {lam}")
    return {
        s: float(occupancy_probability(shape, s)) * float(dens[s](lam)) / base
        for s in shape.boundary_states
    }
