"""Command-line front end: ``arena-model <command> ...``.

Exit codes: 0 success, 2 validation error, 3 numeric-domain error.
``--format machine`` prints one JSON document (schema ``arena-model/1``).
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

import numpy as np
from scipy.stats import chisquare

from . import bridge as br
from .arena import ArenaShape, GridFunction, occupancy_probability
from .bayes import (
    DEFAULT_GRID_SIZE,
    _pick_engine,
    empirical_result_distribution,
    posterior_density_from_counts,
    predictive_result_distribution,
)
from .errors import NumericDomainError, ValidationError
from .estimator import DEFAULT_CAP, estimate_rho, matrix_metrics
from .experiments import Table5Config, check_against_reference, run_table5
from .fileio import FIFA_SHAPE, format_matrix, read_history, read_matrix, write_matrix
from .simulator import make_rng, normal_sampler, simulate_1v1_fluctuations, simulate_arena_game, uniform_sampler

SCHEMA = "arena-model/1"
EXIT_OK, EXIT_VALIDATION, EXIT_DOMAIN = 0, 2, 3


def _num(x):
    """JSON-safe float (inf/nan become strings)."""
    x = float(x)
    return x if math.isfinite(x) else str(x)


def _emit(args, command: str, config: dict, result: dict, table: str) -> None:
    if args.format == "machine":
        doc = {"schema": SCHEMA, "command": command, "config": config, "result": result}
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        print(table.rstrip("\n"))


def _seed(args) -> int:
    if args.seed is None:
        args.seed = int(np.random.SeedSequence().entropy % 2 ** 63)
    return args.seed


def _csv_floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise ValidationError(f"expected comma-separated numbers, got {text!r}") from None


def _regimes(text: str) -> tuple[tuple[int, int], ...]:
    out = []
    for tok in text.split(","):
        try:
            M, n = tok.lower().split("x")
            out.append((int(M), int(n)))
        except ValueError:
            raise ValidationError(f"regime must look like 1024x8, got {tok!r}") from None
    return tuple(out)


# ---------------------------------------------------------------------------


def cmd_predict(args) -> None:
    shape = ArenaShape.parse(args.shape) if args.shape else (FIFA_SHAPE if args.fifa else None)
    if shape is None:
        raise ValidationError("--shape is required (or --fifa for the 5-1 coding)")
    counts = read_history(args.history, shape, fifa=args.fifa)
    engine = _pick_engine(shape, args.engine)
    dist = predictive_result_distribution(shape, counts, engine, args.grid_size)
    base = empirical_result_distribution(shape, counts) if args.baseline else None
    xs = np.linspace(0.0, 1.0, 101)
    dens = posterior_density_from_counts(shape, counts, xs, engine, args.grid_size)

    rows = []
    for s in shape.boundary_states:
        row = {"result": s.label(), "probability": _num(dist.probs[s]),
               "count": counts[s], "prior_probability": _num(occupancy_probability(shape, s))}
        if isinstance(dist.probs[s], Fraction):
            row["exact"] = str(dist.probs[s])
        if base is not None:
            row["baseline"] = _num(base[s])
        rows.append(row)
    config = {"history": str(args.history), "shape": str(shape), "engine": engine,
              "grid_size": args.grid_size, "fifa": args.fifa, "baseline": args.baseline}
    result = {"results": rows, "total": _num(sum(float(v) for v in dist.probs.values())),
              "posterior_density": {"x": [float(v) for v in xs], "density": [_num(v) for v in dens]}}

    lines = [f"shape {shape}  engine {engine}  runs observed {sum(counts.values())}",
             f"{'result':>7} {'count':>6} {'P(next)':>12}" + (f" {'sample':>8}" if base else "")]
    for row in rows:
        line = f"{row['result']:>7} {row['count']:>6} {float(row['probability']):>12.4g}"
        if base is not None:
            line += f" {row['baseline']:>8.3f}"
        lines.append(line)
    _emit(args, "predict", config, result, "\n".join(lines))


def cmd_simulate_matrix(args) -> None:
    seed = _seed(args)
    A = simulate_1v1_fluctuations(args.players, args.rounds, args.rho, args.population, make_rng(seed))
    cols = A.column_sums()
    config = {"players": args.players, "rounds": args.rounds, "rho": args.rho,
              "population": args.population, "seed": seed, "out": args.out}
    result = {"column_sums": [int(c) for c in cols],
              "balanced": bool(np.all(cols * 2 == A.M)),
              "total_wins": int(cols.sum())}
    if args.out:
        write_matrix(args.out, A)
        table = (f"seed {seed}\nwrote {A.M}x{A.n} matrix to {args.out}\n"
                 f"column sums: {' '.join(str(int(c)) for c in cols)}")
    else:
        result["rows"] = format_matrix(A).split()
        table = f"# seed {seed}\n" + format_matrix(A)
    _emit(args, "simulate matrix", config, result, table)


def cmd_simulate_game(args) -> None:
    seed = _seed(args)
    shape = ArenaShape.parse(args.shape)
    sampler = {"uniform": uniform_sampler, "normal": normal_sampler}[args.prior]
    log = simulate_arena_game(shape, args.log2_extra, sampler, make_rng(seed), log=bool(args.out))
    freq = log.result_frequencies()
    N = log.strengths.size
    expected = np.array([float(occupancy_probability(shape, s)) * N for s in shape.boundary_states])
    observed = np.array([freq[s] for s in shape.boundary_states], dtype=float)
    chi2 = chisquare(observed, expected)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write("player,round,run,i,j,won\n")
            for r in log.records():
                fh.write(f"{r.player},{r.round},{r.run},{r.state_before.i},{r.state_before.j},{int(r.won)}\n")
    rows = [{"result": s.label(), "count": int(freq[s]), "frequency": freq[s] / N,
             "expected": float(occupancy_probability(shape, s))} for s in shape.boundary_states]
    config = {"shape": str(shape), "log2_extra": args.log2_extra, "players": N,
              "prior": args.prior, "seed": seed, "out": args.out}
    result = {"results": rows, "chi2": float(chi2.statistic), "p_value": float(chi2.pvalue)}
    lines = [f"seed {seed}  shape {shape}  players {N}",
             f"{'result':>7} {'count':>9} {'freq':>10} {'expected':>10}"]
    lines += [f"{r['result']:>7} {r['count']:>9} {r['frequency']:>10.6f} {r['expected']:>10.6f}" for r in rows]
    lines.append(f"chi2 {chi2.statistic:.4f}  p {chi2.pvalue:.4f}")
    _emit(args, "simulate game", config, result, "\n".join(lines))


def cmd_estimate(args) -> None:
    A = read_matrix(args.matrix)
    est = estimate_rho(A, cap=args.cap)
    mm = matrix_metrics(A, tol=args.tol, strict=args.strict)
    config = {"matrix": str(args.matrix), "cap": args.cap, "tol": args.tol, "strict": args.strict}
    result = {"T": est.T, "rho_hat": _num(est.rho_hat), "rho_raw": _num(est.rho_raw),
              "beta": est.beta, "clamped": est.clamped, "M": est.M, "n": est.n,
              "is_winloss": mm.is_winloss}
    table = "\n".join(f"{k:>10} {v}" for k, v in result.items())
    _emit(args, "estimate", config, result, table)


def cmd_table5(args) -> None:
    seed = _seed(args)
    cfg = Table5Config(rhos=_csv_floats(args.rho), regimes=_regimes(args.regimes), reps=args.reps,
                       seed=seed, population=args.population, cap=args.cap, workers=args.workers)
    cells = run_table5(cfg)
    out = []
    for c in cells:
        d = c.summary()
        if args.compare:
            d["check"] = check_against_reference(c)
        out.append(d)
    config = {"rhos": list(cfg.rhos), "regimes": [list(r) for r in cfg.regimes], "reps": cfg.reps,
              "seed": seed, "population": cfg.population, "cap": cfg.cap, "workers": cfg.workers}
    lines = [f"seed {seed}  reps {cfg.reps}  population {cfg.population}",
             f"{'rho':>5} {'M':>6} {'n':>3} {'mean':>9} {'se':>8} {'MSE':>9} {'se':>8}"
             + ("  ref mean  ref MSE  ok" if args.compare else "")]
    for d in out:
        line = (f"{d['rho']:>5g} {d['M']:>6} {d['n']:>3} {d['mean']:>9.4f} {d['se_mean']:>8.4f}"
                f" {d['mse']:>9.4f} {d['se_mse']:>8.4f}")
        if args.compare and d["check"].get("reference"):
            ref = d["check"]["reference"]
            line += f"  {ref['mean']:>8} {ref['mse']:>8}  {'yes' if d['check']['ok'] else 'NO'}"
        lines.append(line)
    _emit(args, "table5", config, {"cells": out}, "\n".join(lines))


def cmd_bridge(args) -> None:
    if args.direction == "forward":
        p = br.arena_to_glickman(args.x_i, args.x_j, args.rho)
        config = {"x_i": args.x_i, "x_j": args.x_j, "rho": args.rho}
        result = {"mu_i": p.mu_i, "mu_j": p.mu_j, "sigma2": p.sigma2, "valid": p.valid}
    elif args.direction == "inverse":
        x_i, x_j, rho = br.glickman_to_arena(args.mu_i, args.mu_j, args.sigma2)
        config = {"mu_i": args.mu_i, "mu_j": args.mu_j, "sigma2": args.sigma2}
        result = {"x_i": x_i, "x_j": x_j, "rho": rho}
    else:
        if args.x is None and (args.wins is None or args.rounds is None):
            raise ValidationError("delta needs --x or both --wins and --rounds")
        if args.x is not None:
            x = args.x
        else:
            x = br.strength_from_record(args.wins, args.rounds, args.rho)
        delta = br.strength_to_bt_delta(x, args.rho)
        config = {"x": args.x, "wins": args.wins, "rounds": args.rounds, "rho": args.rho}
        result = {"x_hat": x, "delta": delta}
    table = "\n".join(f"{k:>8} {v}" for k, v in result.items())
    _emit(args, f"bridge {args.direction}", config, result, table)


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("table", "machine"), default="table")

    p = argparse.ArgumentParser(prog="arena-model", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("predict", parents=[fmt], help="posterior distribution of the next result")
    q.add_argument("history", help="history file: one 'wins,losses' result per line")
    q.add_argument("--shape", help="arena thresholds m,n")
    q.add_argument("--fifa", action="store_true", help="history uses FIFA codes 0-5 (5-1 arena)")
    q.add_argument("--engine", choices=("auto", "exact", "grid"), default="auto")
    q.add_argument("--grid-size", type=int, default=DEFAULT_GRID_SIZE, dest="grid_size")
    q.add_argument("--baseline", action="store_true", help="also report sample frequencies")
    q.set_defaults(func=cmd_predict)

    s = sub.add_parser("simulate", help="Monte Carlo simulation")
    ssub = s.add_subparsers(dest="mode", required=True)
    sm = ssub.add_parser("matrix", parents=[fmt], help="1-1 arena with fluctuations")
    sm.add_argument("--players", type=int, required=True)
    sm.add_argument("--rounds", type=int, required=True)
    sm.add_argument("--rho", type=float, required=True)
    sm.add_argument("--population", choices=("finite", "infinite"), default="finite")
    sm.add_argument("--seed", type=int)
    sm.add_argument("--out")
    sm.set_defaults(func=cmd_simulate_matrix)
    sg = ssub.add_parser("game", parents=[fmt], help="arena game without fluctuations")
    sg.add_argument("--shape", required=True)
    sg.add_argument("--log2-extra", type=int, default=0, dest="log2_extra")
    sg.add_argument("--prior", choices=("uniform", "normal"), default="uniform")
    sg.add_argument("--seed", type=int)
    sg.add_argument("--out", help="write match records as CSV")
    sg.set_defaults(func=cmd_simulate_game)

    e = sub.add_parser("estimate", parents=[fmt], help="estimate rho from a win-loss matrix file")
    e.add_argument("matrix")
    e.add_argument("--cap", type=float, default=DEFAULT_CAP)
    e.add_argument("--tol", type=float, default=0.05, help="column-sum tolerance as a fraction of M")
    e.add_argument("--strict", action="store_true")
    e.set_defaults(func=cmd_estimate)

    t = sub.add_parser("table5", parents=[fmt], help="replication study of the rho estimator")
    t.add_argument("--rho", default="0.1,0.5,1,2,4,6")
    t.add_argument("--regimes", default="1024x8,1024x16,8192x8")
    t.add_argument("--reps", type=int, default=1000)
    t.add_argument("--seed", type=int)
    t.add_argument("--population", choices=("finite", "infinite"), default="finite")
    t.add_argument("--cap", type=float, default=DEFAULT_CAP)
    t.add_argument("--workers", type=int, default=1)
    t.add_argument("--compare", action="store_true", help="check cells against published values")
    t.set_defaults(func=cmd_table5)

    b = sub.add_parser("bridge", help="arena <-> rating-scale conversions")
    bsub = b.add_subparsers(dest="direction", required=True)
    bf = bsub.add_parser("forward", parents=[fmt])
    bf.add_argument("--x-i", type=float, required=True, dest="x_i")
    bf.add_argument("--x-j", type=float, required=True, dest="x_j")
    bf.add_argument("--rho", type=float, required=True)
    bi = bsub.add_parser("inverse", parents=[fmt])
    bi.add_argument("--mu-i", type=float, required=True, dest="mu_i")
    bi.add_argument("--mu-j", type=float, required=True, dest="mu_j")
    bi.add_argument("--sigma2", type=float, required=True)
    bd = bsub.add_parser("delta", parents=[fmt])
    bd.add_argument("--rho", type=float, required=True)
    bd.add_argument("--x", type=float)
    bd.add_argument("--wins", type=int)
    bd.add_argument("--rounds", type=int)
    for sp in (bf, bi, bd):
        sp.set_defaults(func=cmd_bridge)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except NumericDomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
