"""Multi-run experiments: batches of GA runs, lambda sweeps, CSV output.

Run ``k`` of a batch uses seed ``seed + k``. Runs may execute in a process
pool, but results are always collected in run order, so output does not
depend on the worker count.
"""

from __future__ import annotations

import csv
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .gatesets import get_gateset, target_gate
from .search_genetic import FitnessParams, GaConfig, RunRecord, evolve

EVOLVE_HEADER = ["generation", "mean_error", "mean_length", "best_error", "best_length"]
SWEEP_HEADER = ["lambda", "mean_error", "std_error", "mean_length", "std_length", "runs"]


def worker_count(requested: int | None = None) -> int:
    """Requested workers, else one per CPU; ``BRAIDFORGE_THREADS`` caps either."""
    n = requested if requested is not None else (os.cpu_count() or 1)
    cap = os.environ.get("BRAIDFORGE_THREADS")
    if cap:
        n = min(n, int(cap))
    return max(1, n)


def resolve(gateset: str, target: str):
    gs = get_gateset(gateset)
    tg = target_gate(target, dim=gs.dim if target == "identity" else None)
    if tg.dim != gs.dim:
        raise ValueError(f"target {target!r} is {tg.dim}x{tg.dim} but gate set {gs.name!r} is {gs.dim}x{gs.dim}")
    return gs, tg


def _one_run(args) -> RunRecord:
    gateset, target, lam, cfg = args
    gs, tg = resolve(gateset, target)
    return evolve(cfg, gs, FitnessParams(lam, tg))


def run_batch(
    gateset: str,
    target: str,
    lam: float,
    cfg: GaConfig,
    runs: int,
    workers: int | None = None,
) -> list[RunRecord]:
    """``runs`` independent GA runs with seeds ``cfg.rng_seed + k``."""
    if runs < 1:
        raise ValueError("runs must be at least 1")
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must lie in [0, 1], got {lam}")
    resolve(gateset, target)
    tasks = [(gateset, target, lam, replace(cfg, rng_seed=cfg.rng_seed + k)) for k in range(runs)]
    n = min(worker_count(workers), runs)
    if n == 1:
        return [_one_run(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=n) as pool:
        return list(pool.map(_one_run, tasks))


@dataclass
class MeanRow:
    generation: int
    mean_error: float
    mean_length: float
    best_error: float
    best_length: float


def mean_curve(records: list[RunRecord]) -> list[MeanRow]:
    """Across-run means of the per-generation statistics."""
    if not records:
        return []
    gens = len(records[0].rows)
    if any(len(r.rows) != gens for r in records):
        raise ValueError("records have different generation counts")
    out = []
    for g in range(gens):
        rows = [r.rows[g] for r in records]
        out.append(
            MeanRow(
                generation=rows[0].generation,
                mean_error=float(np.mean([x.mean_error for x in rows])),
                mean_length=float(np.mean([x.mean_length for x in rows])),
                best_error=float(np.mean([x.best_error for x in rows])),
                best_length=float(np.mean([x.best_length for x in rows])),
            )
        )
    return out


def overall_best(records: list[RunRecord]) -> RunRecord:
    """The run with the fittest final braid; earlier runs win ties."""
    best = records[0]
    for r in records[1:]:
        if r.best_fitness > best.best_fitness:
            best = r
    return best


def write_curve_csv(rows: list[MeanRow], fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(EVOLVE_HEADER)
    for r in rows:
        w.writerow([r.generation, repr(r.mean_error), repr(r.mean_length), repr(r.best_error), repr(r.best_length)])


@dataclass
class SweepRow:
    lam: float
    mean_error: float
    std_error: float
    mean_length: float
    std_length: float
    runs: int


def summarize(lam: float, records: list[RunRecord]) -> SweepRow:
    """Mean and population standard deviation (divide by N) of final best braids."""
    errs = np.array([r.best_error for r in records])
    lens = np.array([r.best_length for r in records], dtype=float)
    return SweepRow(lam, float(errs.mean()), float(errs.std()), float(lens.mean()), float(lens.std()), len(records))


def run_sweep(
    gateset: str,
    target: str,
    lambdas: list[float],
    cfg: GaConfig,
    runs: int,
    workers: int | None = None,
) -> list[SweepRow]:
    """One batch per lambda, all batches sharing the same seeds."""
    return [summarize(lam, run_batch(gateset, target, lam, cfg, runs, workers)) for lam in lambdas]


def write_sweep_csv(rows: list[SweepRow], fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(SWEEP_HEADER)
    for r in rows:
        w.writerow([repr(r.lam), repr(r.mean_error), repr(r.std_error), repr(r.mean_length), repr(r.std_length), r.runs])
