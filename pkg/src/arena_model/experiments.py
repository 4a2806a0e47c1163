"""Replication study of the fluctuation estimator.

For each (rho, M, n) cell, ``reps`` independent win-loss matrices are
simulated and rho is re-estimated with the clamped estimator; the cell
reports mean and MSE with Monte Carlo standard errors.  Every cell and
every replication gets its own ``SeedSequence`` child, so results do not
depend on how work is spread over processes.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import ValidationError
from .estimator import DEFAULT_CAP, estimate_rho
from .simulator import make_rng, simulate_1v1_fluctuations

# Published reference values of the replication study: (rho, M, n) -> (mean, MSE), N = 1000.
REFERENCE_TABLE5 = {
    (0.1, 1024, 8): (0.099, 0.011), (0.1, 1024, 16): (0.092, 0.007), (0.1, 8192, 8): (0.087, 0.004),
    (0.5, 1024, 8): (0.496, 0.004), (0.5, 1024, 16): (0.498, 0.002), (0.5, 8192, 8): (0.499, 0.0004),
    (1.0, 1024, 8): (0.997, 0.003), (1.0, 1024, 16): (1.001, 0.002), (1.0, 8192, 8): (0.999, 0.0004),
    (2.0, 1024, 8): (2.003, 0.014), (2.0, 1024, 16): (2.001, 0.006), (2.0, 8192, 8): (2.001, 0.002),
    (4.0, 1024, 8): (4.074, 0.232), (4.0, 1024, 16): (4.018, 0.072), (4.0, 8192, 8): (4.002, 0.024),
    (6.0, 1024, 8): (6.406, 3.597), (6.0, 1024, 16): (6.083, 0.614), (6.0, 8192, 8): (6.034, 0.188),
}


@dataclass
class Table5Config:
    rhos: tuple[float, ...] = (0.1, 0.5, 1.0, 2.0, 4.0, 6.0)
    regimes: tuple[tuple[int, int], ...] = ((1024, 8), (1024, 16), (8192, 8))
    reps: int = 1000
    seed: int = 2019
    population: str = "finite"
    cap: float = DEFAULT_CAP
    workers: int = 1

    def __post_init__(self):
        if self.reps < 1:
            raise ValidationError("reps must be >= 1")
        if self.workers < 1:
            raise ValidationError("workers must be >= 1")
        for rho in self.rhos:
            if rho < 0:
                raise ValidationError(f"rho must be nonnegative, got {rho}")
        for M, n in self.regimes:
            if n < 2:
                raise ValidationError(f"regime {M}x{n}: need at least two rounds")
            if self.population == "finite" and (M < 2 or M % 2):
                raise ValidationError(f"regime {M}x{n}: finite population needs even M")

    def cells(self) -> list[tuple[float, int, int]]:
        return [(float(rho), int(M), int(n)) for rho in self.rhos for M, n in self.regimes]


@dataclass
class CellResult:
    rho: float
    M: int
    n: int
    reps: int
    mean: float
    mse: float
    se_mean: float
    se_mse: float
    clamped_low: int
    clamped_high: int
    estimates: np.ndarray = field(repr=False, compare=False, default=None)

    def summary(self) -> dict:
        d = asdict(self)
        d.pop("estimates")
        return d


def run_cell(rho: float, M: int, n: int, reps: int, seed_seq: np.random.SeedSequence,
             population: str = "finite", cap: float = DEFAULT_CAP) -> CellResult:
    est = np.empty(reps)
    low = high = 0
    for r, child in enumerate(seed_seq.spawn(reps)):
        A = simulate_1v1_fluctuations(M, n, rho, population, make_rng(child))
        e = estimate_rho(A, cap=cap)
        est[r] = e.rho_hat
        low += e.clamped == "low_T"
        high += e.clamped == "high_T"
    sq = (est - rho) ** 2
    ddof = 1 if reps > 1 else 0
    return CellResult(rho, M, n, reps, float(est.mean()), float(sq.mean()),
                      float(est.std(ddof=ddof) / np.sqrt(reps)),
                      float(sq.std(ddof=ddof) / np.sqrt(reps)), low, high, est)


def _run_cell_args(args):
    return run_cell(*args)


def run_table5(cfg: Table5Config) -> list[CellResult]:
    cells = cfg.cells()
    seeds = np.random.SeedSequence(cfg.seed).spawn(len(cells))
    jobs = [(rho, M, n, cfg.reps, ss, cfg.population, cfg.cap)
            for (rho, M, n), ss in zip(cells, seeds)]
    if cfg.workers == 1:
        return [run_cell(*job) for job in jobs]
    with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
        return list(pool.map(_run_cell_args, jobs))


def check_against_reference(cell: CellResult) -> dict:
    """Compare one cell with the published values.

    Mean must be within max(0.05, 3 * sqrt(MSE / N)) and MSE within a factor of 2.
    """
    ref = REFERENCE_TABLE5.get((cell.rho, cell.M, cell.n))
    if ref is None:
        return {"reference": None}
    ref_mean, ref_mse = ref
    mean_tol = max(0.05, 3.0 * np.sqrt(cell.mse / cell.reps))
    mean_ok = abs(cell.mean - ref_mean) <= mean_tol
    ratio = cell.mse / ref_mse if ref_mse else float("inf")
    mse_ok = 0.5 <= ratio <= 2.0
    return {"reference": {"mean": ref_mean, "mse": ref_mse}, "mean_tol": float(mean_tol),
            "mse_ratio": float(ratio), "mean_ok": bool(mean_ok), "mse_ok": bool(mse_ok),
            "ok": bool(mean_ok and mse_ok)}
