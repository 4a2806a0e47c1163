"""Conversions between arena quantities and Bradley-Terry / Glickman scales.

Under fluctuations, P(i beats j | strengths) = Phi((x_i - x_j) / rho).  The
logistic approximation Phi(x) ~ 1 / (1 + exp(-2 k x)), k = sqrt(2/pi),
turns that into a Bradley-Terry difference of 2 k (x_i - x_j) / rho, and
on the Elo-like base-10/400 scale into the static correspondence

    mu = 800 k x,    sigma^2 = 320000 k^2 (rho^2 - 1 / ln(10)^2).

No rating offset is applied: real Elo scales centred near 1500 must add
their own constant.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import NormalDist

from .errors import NumericDomainError

K_CONST = math.sqrt(2.0 / math.pi)
_LN10 = math.log(10.0)
_STD = NormalDist()


def normal_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def normal_quantile(p: float) -> float:
    if not 0.0 < p < 1.0:
        raise NumericDomainError(f"quantile needs p in (0, 1), got {p}")
    return _STD.inv_cdf(p)


def tocher_logistic(x: float) -> float:
    """Logistic approximation of the standard normal CDF."""
    z = 2.0 * K_CONST * x
    if z >= 0:
        return 1.0 / (1.0 + math.exp(-z))
    e = math.exp(z)
    return e / (1.0 + e)


def strength_from_record(wins: int, rounds: int, rho_hat: float) -> float:
    """Strength implied by a win record: sqrt(1 + rho^2) * Phi^-1(wins / rounds)."""
    if rounds < 1 or not 0 <= wins <= rounds:
        raise NumericDomainError(f"invalid record {wins}/{rounds}")
    if wins in (0, rounds):
        raise NumericDomainError(
            f"record {wins}/{rounds} has no finite strength; shrink the win rate first")
    return math.sqrt(1.0 + rho_hat * rho_hat) * normal_quantile(wins / rounds)


def strength_to_bt_delta(x_hat: float | None = None, rho_hat: float = 1.0, *,
                         wins: int | None = None, rounds: int | None = None) -> float:
    """Bradley-Terry scale location 2 k x / rho for a strength or a win record."""
    if rho_hat <= 0:
        raise NumericDomainError(f"rho_hat must be positive, got {rho_hat}")
    if x_hat is None:
        if wins is None or rounds is None:
            raise NumericDomainError("give either x_hat or wins and rounds")
        x_hat = strength_from_record(wins, rounds, rho_hat)
    return 2.0 * K_CONST * x_hat / rho_hat


@dataclass(frozen=True)
class RatingParams:
    mu_i: float
    mu_j: float
    sigma2: float
    valid: bool  # False when sigma2 < 0 (rho below 1/ln 10)


def arena_to_glickman(x_i: float, x_j: float, rho_hat: float) -> RatingParams:
    if rho_hat < 0:
        raise NumericDomainError(f"rho_hat must be nonnegative, got {rho_hat}")
    sigma2 = 320000.0 * K_CONST ** 2 * (rho_hat ** 2 - 1.0 / _LN10 ** 2)
    return RatingParams(800.0 * K_CONST * x_i, 800.0 * K_CONST * x_j, sigma2, sigma2 >= 0)


def glickman_to_arena(mu_i: float, mu_j: float, sigma2: float) -> tuple[float, float, float]:
    if sigma2 < 0:
        raise NumericDomainError(f"sigma2 must be nonnegative, got {sigma2}")
    scale = 800.0 * K_CONST
    rho = math.sqrt(sigma2 / (320000.0 * K_CONST ** 2) + 1.0 / _LN10 ** 2)
    return mu_i / scale, mu_j / scale, rho


def expect_phi_of_normal(mu: float, sigma2: float) -> float:
    """E[Phi(xi)] for xi ~ N(mu, sigma2)."""
    if sigma2 < 0:
        raise NumericDomainError(f"sigma2 must be nonnegative, got {sigma2}")
    return normal_cdf(mu / math.sqrt(1.0 + sigma2))
