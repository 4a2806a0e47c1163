"""Arena model for paired competitions.

Exact and grid computation of result probabilities in m-n arenas,
prior-invariant Bayesian prediction of future results, Monte Carlo
simulation, and estimation of the coefficient of fluctuations.
"""
from .arena import (
    ArenaShape,
    GridFunction,
    State,
    arena_rv_pmf,
    cdf_polynomials,
    conditional_result_polynomials,
    density_recursion_grid,
    occupancy_probability,
    result_probabilities,
    uniform_densities,
)
from .bayes import (
    ResultDistribution,
    RunHistory,
    empirical_result_distribution,
    posterior_density,
    posterior_density_from_counts,
    predictive_result_distribution,
    predictive_trajectory,
    predictive_trajectory_grid,
)
from .bridge import (
    RatingParams,
    arena_to_glickman,
    expect_phi_of_normal,
    glickman_to_arena,
    strength_from_record,
    strength_to_bt_delta,
    tocher_logistic,
)
from .errors import ArenaError, EngineLimitError, NumericDomainError, ValidationError
from .estimator import (
    FluctuationEstimate,
    T_statistic,
    competition_index,
    counting_matrix,
    estimate_rho,
    matrix_metrics,
    rho_from_T,
    second_moment_of_wins,
    win_rate_moments,
)
from .ratpoly import RatPoly
from .simulator import (
    GameLog,
    Matching,
    WinLossMatrix,
    play_runs,
    random_matching,
    simulate_1v1_fluctuations,
    simulate_arena_game,
)

__version__ = "0.1.0"
