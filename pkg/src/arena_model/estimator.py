"""Coefficient of fluctuations, competition index and win-loss matrix metrics.

For a 1-1 arena with uniform fluctuations the win rate of a N(0, 1)
player is xi = Phi(X / sqrt(1 + rho^2)).  Its second moment pins down rho,
and the statistic T (built from squared row sums of the win-loss matrix)
estimates that second moment consistently.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import NumericDomainError, ValidationError
from .simulator import WinLossMatrix

DEFAULT_CAP = 10.0
BOUNDARY_TOL = 1e-12
LOW_T = Fraction(1, 4)
HIGH_T = Fraction(1, 3)


def win_rate_moments(rho: float) -> tuple[float, float]:
    """Mean and second moment of the win rate variable with parameter ``rho``."""
    if rho < 0:
        raise NumericDomainError(f"rho must be nonnegative, got {rho}")
    if rho == 0:
        # arctan(1/sqrt(3)) = pi/6
        return 0.5, 1.0 / 3.0
    if math.isinf(rho):
        return 0.5, 0.25
    r2 = rho * rho
    return 0.5, 0.5 - math.atan(math.sqrt((1.0 + r2) / (3.0 + r2))) / math.pi


def second_moment_of_wins(n: int, rho: float) -> float:
    """E[Y^2] for Y the number of wins in ``n`` rounds (infinite population)."""
    if n < 1:
        raise NumericDomainError(f"n must be >= 1, got {n}")
    _, m2 = win_rate_moments(rho)
    return n * 0.5 + (n * n - n) * m2


def rho_from_T(T: float) -> float:
    """Invert the second-moment formula; defined for 1/4 < T < 1/3."""
    if not LOW_T < T < HIGH_T:
        raise NumericDomainError(f"T = {T} is outside the open interval (1/4, 1/3)")
    t2 = math.tan(math.pi * T) ** 2
    return math.sqrt((3.0 - t2) / (t2 - 1.0))


def competition_index(rho: float) -> float:
    """beta = 1 / (1 + rho), mapping [0, inf] onto [1, 0]."""
    if rho < 0:
        raise NumericDomainError(f"rho must be nonnegative, got {rho}")
    return 0.0 if math.isinf(rho) else 1.0 / (1.0 + rho)


@dataclass(frozen=True)
class FluctuationEstimate:
    """Estimated fluctuation coefficient of a win-loss matrix.

    ``rho_hat`` applies the simulation-protocol clamps (``cap`` below the
    valid range of T, 0 above it).  ``rho_raw`` is the unclamped value
    extended to the boundaries (inf for T <= 1/4, 0 for T >= 1/3) and
    ``beta`` is computed from it, so beta = 0 whenever T <= 1/4.
    """

    T: float
    rho_hat: float
    rho_raw: float
    beta: float
    clamped: str  # "none", "low_T" or "high_T"
    M: int
    n: int

    @property
    def valid(self) -> bool:
        return self.clamped == "none"


def _as_array(matrix) -> np.ndarray:
    a = matrix.entries if isinstance(matrix, WinLossMatrix) else np.asarray(matrix)
    if a.ndim != 2:
        raise ValidationError("matrix must be 2-d")
    if not np.all((a == 0) | (a == 1)):
        raise ValidationError("matrix entries must be 0 or 1")
    return a


def T_statistic(matrix) -> Fraction:
    """T = (sum(Y_l^2) / (M n) - 1/2) / (n - 1), exactly."""
    a = _as_array(matrix)
    M, n = a.shape
    if n < 2:
        raise NumericDomainError("T needs at least two rounds per player")
    if M < 1:
        raise ValidationError("matrix has no rows")
    y = a.sum(axis=1, dtype=np.int64)
    sq = int(np.dot(y, y))
    return (Fraction(sq, M * n) - Fraction(1, 2)) / (n - 1)


def _from_T(T: Fraction | float, M: int, n: int, cap: float, tol: float) -> FluctuationEstimate:
    Tf = float(T)
    if T <= LOW_T or Tf <= 0.25 + tol:
        return FluctuationEstimate(Tf, cap, math.inf, 0.0, "low_T", M, n)
    if T >= HIGH_T or Tf >= 1.0 / 3.0 - tol:
        return FluctuationEstimate(Tf, 0.0, 0.0, 1.0, "high_T", M, n)
    rho = rho_from_T(Tf)
    return FluctuationEstimate(Tf, rho, rho, competition_index(rho), "none", M, n)


def estimate_rho(matrix, cap: float = DEFAULT_CAP, boundary_tol: float = BOUNDARY_TOL
                 ) -> FluctuationEstimate:
    """Moment estimator of the coefficient of fluctuations from a win-loss matrix."""
    a = _as_array(matrix)
    M, n = a.shape
    if M < 2:
        raise ValidationError("need at least two players")
    return _from_T(T_statistic(a), M, n, cap, boundary_tol)


@dataclass(frozen=True)
class MatrixMetrics:
    is_winloss: bool
    T: float
    rho: float
    beta: float
    column_sums: tuple[int, ...]


def matrix_metrics(A, tol: float = 0.05, strict: bool = False) -> MatrixMetrics:
    """Chaos metrics of a binary matrix: win-loss check, T, rho and beta.

    A matrix counts as win-loss when every column sum is within ``tol * M``
    of M/2 (exactly M/2 with ``strict``).
    """
    a = _as_array(A)
    M, n = a.shape
    cols = a.sum(axis=0, dtype=np.int64)
    slack = 0.0 if strict else tol * M
    is_wl = bool(np.all(np.abs(cols - M / 2) <= slack))
    est = _from_T(T_statistic(a), M, n, math.inf, BOUNDARY_TOL)
    return MatrixMetrics(is_wl, est.T, est.rho_raw, est.beta, tuple(int(c) for c in cols))


def counting_matrix(n: int) -> np.ndarray:
    """2**n x n matrix whose row r is the n-digit binary expansion of r."""
    if isinstance(n, bool) or int(n) != n or not 1 <= n <= 20:
        raise ValidationError(f"digits must be in 1..20, got {n!r}")
    r = np.arange(2 ** n, dtype=np.int64)[:, None]
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)[None, :]
    return ((r >> shifts) & 1).astype(np.uint8)
