"""Batch trials of the online policy against offline optima, written as CSV.

Per-instance seeds are derived from the master seed and the global instance
index, and rows are assembled in task order, so the CSV content is a pure
function of (config, master seed) regardless of the worker count, with one
exception: runtime_ms is measured wall-clock time and is inherently
unreproducible. Every other column is byte-stable.

When an instance exceeds both exact-solver caps the row falls back to a
bracket: the greedy upper bound and the pigeonhole window lower bound. Such
rows carry ``lo:hi`` intervals in the opt_cost and ratio columns instead of
points.
"""

from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .generators import GenKind, GenSpec, derive_seed, generate
from .model import Instance
from .offline import (
    BRUTE_FORCE_CAP,
    THRESHOLD_DP_CAP,
    block_partition_greedy,
    brute_force_opt,
    pregular_opt,
    threshold_dp_opt,
    window_lower_bound,
)
from .online import Algorithm1Policy, simulate

CSV_FIELDS = (
    "instance_id",
    "kind",
    "n",
    "p_or_beta",
    "K",
    "seed",
    "alg_cost",
    "alg_q",
    "opt_cost",
    "opt_q",
    "opt_method",
    "ratio",
    "runtime_ms",
)

BRACKET_BOUND = "bracket_bound"

OPT_METHODS = ("auto", "brute_force", "threshold_dp", "greedy", "closed_form", "bracket")


class ConfigError(ValueError):
    """Raised for infeasible experiment configurations, before any work runs."""


@dataclass(frozen=True)
class ExperimentRecord:
    instance_id: int
    kind: str
    n: int
    p_or_beta: str
    K: int
    seed: int
    alg_cost: int
    alg_q: int
    opt_lo: int
    opt_hi: int
    opt_q: int
    opt_method: str
    runtime_ms: int

    @property
    def is_point(self) -> bool:
        return self.opt_lo == self.opt_hi

    @property
    def ratio_lo(self) -> float:
        return self.alg_cost / self.opt_hi

    @property
    def ratio_hi(self) -> float:
        return self.alg_cost / self.opt_lo

    def csv_row(self) -> list[str]:
        if self.is_point:
            opt_cell = str(self.opt_lo)
            ratio_cell = f"{self.ratio_lo:.6f}"
        else:
            opt_cell = f"{self.opt_lo}:{self.opt_hi}"
            ratio_cell = f"{self.ratio_lo:.6f}:{self.ratio_hi:.6f}"
        return [
            str(self.instance_id),
            self.kind,
            str(self.n),
            self.p_or_beta,
            str(self.K),
            str(self.seed),
            str(self.alg_cost),
            str(self.alg_q),
            opt_cell,
            str(self.opt_q),
            self.opt_method,
            ratio_cell,
            str(self.runtime_ms),
        ]


@dataclass(frozen=True)
class ExperimentConfig:
    kind: GenKind
    n_values: tuple[int, ...]
    K: int = 1
    p_values: tuple[int, ...] = ()
    beta_values: tuple[float, ...] = ()
    replication: int = 100
    master_seed: int = 0
    opt_method: str = "auto"
    jobs: int = 1
    brute_cap: int = BRUTE_FORCE_CAP
    dp_cap: int = THRESHOLD_DP_CAP


def _grid(config: ExperimentConfig) -> list[int | float | None]:
    if config.kind is GenKind.GEOMETRIC:
        if not config.beta_values:
            raise ConfigError("geometric experiments need --beta values")
        for b in config.beta_values:
            if not 0.0 < b < 1.0:
                raise ConfigError(f"beta must be in (0, 1), got {b}")
        return list(config.beta_values)
    if config.kind in (GenKind.PREGULAR, GenKind.PBOUNDED_UNIFORM):
        if not config.p_values:
            raise ConfigError(f"{config.kind.value} experiments need --p values")
        for p in config.p_values:
            if p < 1:
                raise ConfigError(f"p must be >= 1, got {p}")
        return list(config.p_values)
    return [None]  # regular and sparse carry no grid parameter


def validate_config(config: ExperimentConfig) -> None:
    if not config.n_values or any(n < 1 for n in config.n_values):
        raise ConfigError(f"n values must all be >= 1, got {config.n_values}")
    if config.K < 1:
        raise ConfigError(f"K must be >= 1, got {config.K}")
    if config.replication < 1:
        raise ConfigError(f"replication must be >= 1, got {config.replication}")
    if config.jobs < 1:
        raise ConfigError(f"jobs must be >= 1, got {config.jobs}")
    if config.opt_method not in OPT_METHODS:
        raise ConfigError(f"unknown opt method {config.opt_method!r}")
    if config.opt_method == "closed_form" and config.kind not in (GenKind.REGULAR, GenKind.PREGULAR):
        raise ConfigError("closed_form optimum only applies to evenly spaced kinds")
    _grid(config)


def _p_or_beta_cell(kind: GenKind, value) -> str:
    if kind is GenKind.GEOMETRIC:
        return str(value)
    if kind is GenKind.REGULAR:
        return "1"
    if kind is GenKind.SPARSE:
        return "0"
    return str(value)


def _bracket(inst: Instance) -> tuple[int, int, int]:
    """(lower, upper, upper's q): pigeonhole lower bound, greedy upper bound."""
    upper = block_partition_greedy(inst)
    lower = window_lower_bound(inst)
    assert lower <= upper.cost
    return lower, upper.cost, upper.q


def _solve_offline(
    inst: Instance, kind: GenKind, p_value, method: str, brute_cap: int, dp_cap: int
) -> tuple[int, int, int, str]:
    """Resolve the optimum (or bracket) for one instance: (lo, hi, q, method)."""
    if method == "auto":
        if kind in (GenKind.REGULAR, GenKind.PREGULAR):
            method = "closed_form"
        elif inst.n <= brute_cap:
            method = "brute_force"
        elif inst.n <= dp_cap:
            method = "threshold_dp"
        else:
            method = "bracket"
    if method == "closed_form":
        p = 1 if kind is GenKind.REGULAR else p_value
        cost, q = pregular_opt(inst.n, p, inst.K)
        return cost, cost, q, "closed_form"
    if method == "brute_force":
        r = brute_force_opt(inst, brute_cap)
        return r.cost, r.cost, r.q, r.method
    if method == "threshold_dp":
        r = threshold_dp_opt(inst, dp_cap)
        return r.cost, r.cost, r.q, r.method
    if method == "greedy":
        r = block_partition_greedy(inst)
        return r.cost, r.cost, r.q, r.method
    lo, hi, q = _bracket(inst)
    return lo, hi, q, BRACKET_BOUND


def _run_task(task) -> ExperimentRecord:
    (instance_id, kind_value, n, pb, K, seed, method, brute_cap, dp_cap) = task
    kind = GenKind(kind_value)
    started = time.perf_counter()
    spec = GenSpec(
        kind=kind,
        n=n,
        K=K,
        p=pb if kind in (GenKind.PREGULAR, GenKind.PBOUNDED_UNIFORM) else None,
        beta=pb if kind is GenKind.GEOMETRIC else None,
        seed=seed,
    )
    inst = generate(spec)
    _, _, breakdown = simulate(inst.releases, Algorithm1Policy(K), K, record_trace=False)
    lo, hi, opt_q, method_used = _solve_offline(inst, kind, pb, method, brute_cap, dp_cap)
    runtime_ms = round((time.perf_counter() - started) * 1000)
    return ExperimentRecord(
        instance_id=instance_id,
        kind=kind.value,
        n=n,
        p_or_beta=_p_or_beta_cell(kind, pb),
        K=K,
        seed=seed,
        alg_cost=breakdown.total,
        alg_q=breakdown.repl_count,
        opt_lo=lo,
        opt_hi=hi,
        opt_q=opt_q,
        opt_method=method_used,
        runtime_ms=runtime_ms,
    )


def _tasks(config: ExperimentConfig) -> list[tuple]:
    tasks = []
    instance_id = 0
    for pb in _grid(config):
        for n in config.n_values:
            for _ in range(config.replication):
                seed = derive_seed(config.master_seed, instance_id)
                tasks.append(
                    (
                        instance_id,
                        config.kind.value,
                        n,
                        pb,
                        config.K,
                        seed,
                        config.opt_method,
                        config.brute_cap,
                        config.dp_cap,
                    )
                )
                instance_id += 1
    return tasks


def run_experiment(config: ExperimentConfig) -> list[ExperimentRecord]:
    """Run all cells of the grid; row order and content do not depend on ``jobs``."""
    validate_config(config)
    tasks = _tasks(config)
    if config.jobs == 1:
        return [_run_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=config.jobs) as pool:
        chunk = max(1, len(tasks) // (config.jobs * 8))
        return list(pool.map(_run_task, tasks, chunksize=chunk))


def records_to_csv(records) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for rec in records:
        writer.writerow(rec.csv_row())
    return buf.getvalue()


@dataclass(frozen=True)
class SummaryRow:
    kind: str
    n: int
    p_or_beta: str
    K: int
    count: int
    mean_lo: float
    mean_hi: float
    min_lo: float
    max_hi: float

    def line(self) -> str:
        if self.mean_lo == self.mean_hi:
            mean = f"{self.mean_lo:.6f}"
        else:
            mean = f"{self.mean_lo:.6f}:{self.mean_hi:.6f}"
        return (
            f"{self.kind},{self.n},{self.p_or_beta},{self.K},{self.count},"
            f"{mean},{self.min_lo:.6f},{self.max_hi:.6f}"
        )


SUMMARY_HEADER = "kind,n,p_or_beta,K,count,mean_ratio,min_ratio,max_ratio"


def summarize(records) -> list[SummaryRow]:
    """Per-cell ratio statistics recomputed from the rows (no streaming state)."""
    cells: dict[tuple, list[ExperimentRecord]] = {}
    order = []
    for rec in records:
        key = (rec.kind, rec.n, rec.p_or_beta, rec.K)
        if key not in cells:
            cells[key] = []
            order.append(key)
        cells[key].append(rec)
    out = []
    for key in order:
        rows = cells[key]
        los = [r.ratio_lo for r in rows]
        his = [r.ratio_hi for r in rows]
        out.append(
            SummaryRow(
                kind=key[0],
                n=key[1],
                p_or_beta=key[2],
                K=key[3],
                count=len(rows),
                mean_lo=sum(los) / len(los),
                mean_hi=sum(his) / len(his),
                min_lo=min(los),
                max_hi=max(his),
            )
        )
    return out
