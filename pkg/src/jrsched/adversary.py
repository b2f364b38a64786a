"""Adaptive lower-bound games played against an online policy.

Each game builds its input while watching the policy's irreversible decisions:
a first job at time 0, then each further job released one time unit after the
previous job's observed start, the last one carrying the end-of-input signal.
Every finished game is audited twice: the realized instance is solved exactly
by brute force, and the closed-form menu of candidate optima (one value per
replenishment count) must agree with it.

The two-job game forces a ratio approaching 2 against the threshold trigger
policy and 3/2 against any policy in the limit; the three-job game forces 4/3.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .model import Instance
from .offline import brute_force_opt
from .online import DivergenceError, Policy, ReleaseSource, make_policy, simulate


class AuditError(AssertionError):
    """Closed-form game optimum disagreed with the brute-force oracle."""


@dataclass(frozen=True)
class GameReport:
    instance: Instance
    alg_cost: int
    alg_q: int
    opt_cost: int
    opt_menu: int
    ratio: float
    observed_starts: tuple[int, ...]
    transcript: tuple[str, ...]


def two_job_opt_menu(K: int, t: int) -> int:
    """Exact offline optimum for releases {0, t+1}: replenish once at t+1 or
    at both release dates."""
    return min(2 * K + 1, K + t + 2)


def three_job_opt_menu(K: int, t1: int, t2: int) -> int:
    """Exact offline optimum for releases {0, t1+1, t2+1} by replenishment count.

    One replenishment costs K + t2 + 2 and three cost 3K + 1. With two, the
    only useful placements are {t1+1, t2+1} (first job waits, flow t1 + 2) and
    {0, t2+1} (second job waits, flow t2 - t1 + 1); a flow of t1 + 1 with two
    replenishments is not achievable, because covering the third job forces
    the second replenishment to t2 + 1 and the second job's flow above it.
    """
    return min(K + t2 + 2, 2 * K + min(t1 + 2, t2 - t1 + 1), 3 * K + 1)


class _AdaptiveAdversary(ReleaseSource):
    """Releases job i+1 one unit after job i's observed start; aborts via a
    watchdog if the policy goes ``limit`` time units without replenishing."""

    def __init__(self, total_jobs: int, limit: int):
        self._queue: list[int] = [0]
        self._placed = 1
        self._total = total_jobs
        self._limit = limit
        self._last_flush = 0
        self.trigger_starts: list[int] = []
        self.releases: list[int] = [0]
        self.transcript: list[str] = ["release job 0 at t=0"]

    def peek(self) -> int | None:
        return self._queue[0] if self._queue else None

    def pop(self) -> int:
        return self._queue.pop(0)

    def finished(self) -> bool:
        return self._placed >= self._total and not self._queue

    def on_step(self, now: int) -> None:
        if now - self._last_flush > self._limit:
            raise DivergenceError(
                f"no replenishment for {now - self._last_flush} time units (limit {self._limit})"
            )

    def on_flush(self, time: int, starts: dict[int, int]) -> None:
        self._last_flush = time
        for j in sorted(starts):
            self.transcript.append(f"job {j} started at t={starts[j]}")
            if j == self._placed - 1 and self._placed < self._total:
                r = starts[j] + 1
                self._queue.append(r)
                self.releases.append(r)
                self.trigger_starts.append(starts[j])
                self._placed += 1
                final = " (final)" if self._placed == self._total else ""
                self.transcript.append(f"release job {j + 1} at t={r}{final}")


def _resolve_policy(policy: str | Callable[[int], Policy], K: int) -> Policy:
    if isinstance(policy, str):
        return make_policy(policy, K)
    return policy(K)


def _play(policy, K: int, total_jobs: int, horizon: int | None) -> tuple[_AdaptiveAdversary, int, int]:
    if K < 1:
        raise ValueError(f"K must be >= 1, got {K}")
    limit = horizon if horizon is not None else 10 * K + 10
    src = _AdaptiveAdversary(total_jobs, limit)
    _, _, breakdown = simulate(src, _resolve_policy(policy, K), K)
    return src, breakdown.total, breakdown.repl_count


def _finish(src: _AdaptiveAdversary, K: int, alg_cost: int, alg_q: int, menu: int) -> GameReport:
    inst = Instance(tuple(src.releases), K)
    opt = brute_force_opt(inst)
    if opt.cost != menu:
        raise AuditError(
            f"menu optimum {menu} disagrees with brute force {opt.cost} on {inst.releases}"
        )
    src.transcript.append(f"alg={alg_cost} opt={opt.cost}")
    return GameReport(
        instance=inst,
        alg_cost=alg_cost,
        alg_q=alg_q,
        opt_cost=opt.cost,
        opt_menu=menu,
        ratio=alg_cost / opt.cost,
        observed_starts=tuple(src.trigger_starts),
        transcript=tuple(src.transcript),
    )


def two_job_game(policy, K: int, horizon: int | None = None) -> GameReport:
    """Adaptive two-job game: second (final) job released right after the
    first job's start. No policy beats ratio 3/2 in the large-K limit."""
    src, alg_cost, alg_q = _play(policy, K, total_jobs=2, horizon=horizon)
    (t,) = src.trigger_starts
    return _finish(src, K, alg_cost, alg_q, two_job_opt_menu(K, t))


def three_job_game(policy, K: int, horizon: int | None = None) -> GameReport:
    """Adaptive three-job game: each of the two later jobs released right
    after the previous job's start. No policy beats ratio 4/3 in the limit."""
    src, alg_cost, alg_q = _play(policy, K, total_jobs=3, horizon=horizon)
    t1, t2 = src.trigger_starts
    return _finish(src, K, alg_cost, alg_q, three_job_opt_menu(K, t1, t2))


GAMES = {"two_job": two_job_game, "three_job": three_job_game}
