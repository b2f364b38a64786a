"""Exact and heuristic offline solvers, plus closed forms for evenly spaced inputs.

Two independent exact methods are provided. ``brute_force_opt`` enumerates
replenishment subsets of the release dates (sufficient: moving a replenishment
earlier to the previous release never hurts). ``threshold_dp_opt`` searches
over thresholds F on the maximum flow time: an optimal solution partitions the
release-ordered jobs into consecutive blocks, one replenishment per block at
the block's last release, so for each candidate F it suffices to minimise the
number of blocks subject to every block's first-job flow being at most F.

The cheap ``block_partition_greedy`` uses the same threshold structure but
extends every block maximally; it always returns a feasible solution with cost
at least the optimum and is never used where exactness is asserted.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass

from .model import Instance, Solution, asap_schedule, evaluate

BRUTE_FORCE = "brute_force"
THRESHOLD_DP = "threshold_dp"
GREEDY_HEURISTIC = "greedy_heuristic"
CLOSED_FORM = "closed_form"

BRUTE_FORCE_CAP = 16
THRESHOLD_DP_CAP = 2000


class SolverCapError(ValueError):
    """Raised when an exact solver is asked to exceed its certified size cap."""


@dataclass(frozen=True)
class OptResult:
    cost: int
    solution: Solution
    q: int
    method: str


@dataclass(frozen=True)
class PRegularBounds:
    """Closed-form bracket 2*sqrt(npK) - p + 1 <= OPT <= 2*sqrt(npK) + K + 1."""

    lower: float
    upper: float


def _asap_cost(rel: tuple[int, ...], Q: tuple[int, ...], K: int) -> int:
    # inner loop of the brute force; Q sorted, Q[-1] >= rel[-1]
    ptr = 0
    prev_c = -1
    f_max = 0
    for r in rel:
        while Q[ptr] < r:
            ptr += 1
        tau = Q[ptr]
        s = tau if tau > prev_c else prev_c
        prev_c = s + 1
        f = prev_c - r
        if f > f_max:
            f_max = f
    return K * len(Q) + f_max


def brute_force_opt(inst: Instance, cap: int = BRUTE_FORCE_CAP) -> OptResult:
    """Exact optimum by enumerating replenishment subsets of the release dates.

    Only subsets containing the last release are feasible. Ties are broken by
    fewer replenishments, then by lexicographically earliest replenishment set.
    """
    n = inst.n
    if n > cap:
        raise SolverCapError(f"brute force refused: {n} jobs exceeds cap {cap}")
    rel = inst.releases
    K = inst.K
    head = rel[:-1]
    last = rel[-1]
    best_key = None
    best_Q = None
    for mask in range(1 << (n - 1)):
        Q = tuple(r for i, r in enumerate(head) if mask >> i & 1) + (last,)
        key = (_asap_cost(rel, Q, K), len(Q), Q)
        if best_key is None or key < best_key:
            best_key = key
            best_Q = Q
    sol = asap_schedule(inst, best_Q)
    return OptResult(best_key[0], sol, len(best_Q), BRUTE_FORCE)


# --- threshold structure ----------------------------------------------------


def _max_window_jobs(rel: tuple[int, ...], F: int) -> int:
    # most jobs whose releases fit in any window of span F-1
    best = 1
    j = 0
    for i in range(len(rel)):
        while rel[i] - rel[j] > F - 1:
            j += 1
        if i - j + 1 > best:
            best = i - j + 1
    return best


def _min_blocks(rel: tuple[int, ...], F: int, q_cap: int) -> int | None:
    """Minimum number of consecutive blocks with every first-job flow <= F.

    Forward search over block boundaries keeping, per first-uncovered-job
    index, the Pareto frontier of (blocks used, machine-free time): processed
    as breadth-first layers in the block count, so the first layer to cover all
    jobs is minimal. Returns None if more than ``q_cap`` blocks would be
    needed.
    """
    n = len(rel)
    if q_cap < 1:
        return None
    w = _max_window_jobs(rel, F)
    if (n + w - 1) // w > q_cap:
        return None
    # best_free[i]: smallest machine-free time seen at index i in any earlier
    # layer; a new state is Pareto-dominated iff its free time is not smaller.
    best_free = [None] * (n + 1)
    best_free[0] = 0
    layer = {0: 0}
    q = 0
    while layer:
        if n in layer:
            return q
        if q == q_cap:
            return None
        budget = q_cap - q - 1
        nxt: dict[int, int] = {}
        for i, free in layer.items():
            limit = rel[i] + F - 1
            if free > limit:
                continue
            kmax = bisect_right(rel, limit, i) - 1
            start_floor = free  # block start is max(free, rel[k])
            for k in range(i, kmax + 1):
                d = k + 1
                if d < n and (n - d + w - 1) // w > budget:
                    continue  # cannot finish within the block budget
                s = rel[k] if rel[k] > start_floor else start_floor
                nf = s + d - i
                seen = best_free[d]
                if seen is not None and seen <= nf:
                    continue
                cur = nxt.get(d)
                if cur is None or nf < cur:
                    nxt[d] = nf
        for d, f in nxt.items():
            prev = best_free[d]
            if prev is None or f < prev:
                best_free[d] = f
        layer = nxt
        q += 1
    return None


def _suffix_min_blocks(rel: tuple[int, ...], F: int) -> list[int]:
    # suffix counts via maximal jumps; the machine-free time never blocks a
    # partition here: with distinct integer releases a block of span <= F-1
    # always clears before the next block's flow cap binds.
    n = len(rel)
    suf = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        kmax = bisect_right(rel, rel[i] + F - 1, i) - 1
        suf[i] = 1 + suf[kmax + 1]
    return suf


def _partition_blocks(rel: tuple[int, ...], F: int, q_target: int) -> list[int]:
    """Lexicographically earliest block-last indices for a q_target partition."""
    n = len(rel)
    suf = _suffix_min_blocks(rel, F)
    blocks: list[int] = []
    i = 0
    remaining = q_target
    while i < n:
        kmax = bisect_right(rel, rel[i] + F - 1, i) - 1
        chosen = None
        for k in range(i, kmax + 1):
            # after this block we may split freely, so any count between the
            # suffix minimum and one-per-job is reachable
            if suf[k + 1] <= remaining - 1 <= n - (k + 1):
                chosen = k
                break
        if chosen is None:
            raise AssertionError("partition reconstruction failed; solver bug")
        blocks.append(chosen)
        i = chosen + 1
        remaining -= 1
    return blocks


def _blocks_to_solution(inst: Instance, blocks: list[int]) -> Solution:
    Q = tuple(inst.releases[k] for k in blocks)
    return asap_schedule(inst, Q)


def _candidate_flows(rel: tuple[int, ...], ceiling: int) -> list[int]:
    # distinct r_k - r_j + 1 values up to the ceiling, ascending
    out = set()
    for j in range(len(rel)):
        kmax = bisect_right(rel, rel[j] + ceiling - 1, j) - 1
        base = rel[j]
        for k in range(j, kmax + 1):
            out.add(rel[k] - base + 1)
    return sorted(out)


def threshold_dp_opt(inst: Instance, cap: int = THRESHOLD_DP_CAP) -> OptResult:
    """Exact optimum via the candidate-threshold search.

    Candidate maximum flows are the pairwise values r_k - r_j + 1 (the maximum
    flow of any solution is attained by the first job started at a
    replenishment after idle time). Candidates are scanned in increasing order
    with monotone pruning: a candidate F cannot beat the incumbent once
    K + F exceeds it, since at least one block is always needed.
    """
    n = inst.n
    if n > cap:
        raise SolverCapError(f"threshold solver refused: {n} jobs exceeds cap {cap}")
    rel = inst.releases
    K = inst.K
    seed = block_partition_greedy(inst)
    best_cost, best_q = seed.cost, seed.q
    for F in _candidate_flows(rel, best_cost - K):
        if K + F > best_cost:
            break
        q_cap = (best_cost - F) // K
        q = _min_blocks(rel, F, q_cap)
        if q is None:
            continue
        cost = K * q + F
        if (cost, q) < (best_cost, best_q):
            best_cost, best_q = cost, q
    f_hat = best_cost - K * best_q
    sol = _blocks_to_solution(inst, _partition_blocks(rel, f_hat, best_q))
    breakdown = evaluate(inst, sol)
    if breakdown.total != best_cost or breakdown.repl_count != best_q:
        raise AssertionError("threshold solver produced an inconsistent solution")
    return OptResult(best_cost, sol, best_q, THRESHOLD_DP)


def block_partition_greedy(inst: Instance) -> OptResult:
    """Fast feasible solution: maximal blocks for each candidate flow cap.

    Dominates the optimum from above by construction. Whether it is always
    exactly optimal is not relied upon anywhere; results are flagged
    ``greedy_heuristic``.
    """
    rel = inst.releases
    n = inst.n
    K = inst.K
    incumbent = min(K * n + 1, K + rel[-1] - rel[0] + 1)
    best: tuple[int, int, list[int]] | None = None
    for F in _candidate_flows(rel, incumbent - K):
        if best is not None and K + F > best[0]:
            break
        blocks: list[int] = []
        free = 0
        i = 0
        feasible = True
        f_max = 0
        while i < n:
            limit = rel[i] + F - 1
            if free > limit:
                feasible = False
                break
            k = bisect_right(rel, limit, i) - 1
            start = max(free, rel[k])
            f_max = max(f_max, start + 1 - rel[i])
            blocks.append(k)
            free = start + (k - i + 1)
            i = k + 1
        if not feasible:
            continue
        cost = K * len(blocks) + f_max
        if best is None or (cost, len(blocks)) < (best[0], best[1]):
            best = (cost, len(blocks), blocks)
    assert best is not None  # F = span + 1 always yields a single feasible block
    sol = _blocks_to_solution(inst, best[2])
    breakdown = evaluate(inst, sol)
    return OptResult(breakdown.total, sol, breakdown.repl_count, GREEDY_HEURISTIC)


# --- evenly spaced inputs ---------------------------------------------------


def pregular_cost_with_q(n: int, p: int, K: int, q: int) -> int:
    """Minimum cost among solutions with exactly q replenishments on the
    p-regular input of n jobs: q*K + (ceil(n/q) - 1)*p + 1."""
    _check_pregular_args(n, p, K)
    if not 1 <= q <= n:
        raise ValueError(f"q must be in [1, {n}], got {q}")
    return q * K + (-(-n // q) - 1) * p + 1


def pregular_opt(n: int, p: int, K: int) -> tuple[int, int]:
    """Exact optimum on the p-regular input, with the smallest optimal q."""
    _check_pregular_args(n, p, K)
    best_cost = None
    best_q = None
    for q in range(1, n + 1):
        cost = q * K + (-(-n // q) - 1) * p + 1
        if best_cost is None or cost < best_cost:
            best_cost, best_q = cost, q
    return best_cost, best_q


def pregular_witness(n: int, p: int, K: int, q: int) -> Solution:
    """Feasible solution on the p-regular input attaining pregular_cost_with_q.

    The release-ordered jobs are split into (n mod q) blocks of ceil(n/q) jobs
    followed by the rest of floor(n/q) jobs, each block replenished at its last
    job's release and scheduled as early as possible. Evenly spacing the
    replenishment times instead (at multiples of p*ceil(n/q)) looks natural but
    is not even monotone for some (n, q); the block form always attains the
    claimed cost.
    """
    _check_pregular_args(n, p, K)
    if not 1 <= q <= n:
        raise ValueError(f"q must be in [1, {n}], got {q}")
    base, rem = divmod(n, q)
    sizes = [base + 1] * rem + [base] * (q - rem)
    inst = Instance(tuple(i * p for i in range(n)), K)
    blocks = []
    idx = -1
    for s in sizes:
        idx += s
        blocks.append(idx)
    return _blocks_to_solution(inst, blocks)


def pregular_bounds(n: int, p: int, K: int) -> PRegularBounds:
    """Analytic bracket around pregular_opt; the only floats in the solvers."""
    _check_pregular_args(n, p, K)
    root = 2.0 * math.sqrt(n * p * K)
    return PRegularBounds(lower=root - p + 1, upper=root + K + 1)


def window_lower_bound(inst: Instance) -> int:
    """Sound lower bound on the optimum of any instance, by pigeonhole.

    A solution with q replenishments serves at least ceil(n/q) jobs from one
    replenishment; the earliest-released of those jobs then flows at least the
    minimum release span of that many consecutive jobs, plus one. Minimising
    K*q + that flow over q bounds every solution from below. Equals the exact
    optimum on evenly spaced inputs.
    """
    rel = inst.releases
    n = inst.n
    K = inst.K
    spans: dict[int, int] = {}

    def min_span(m: int) -> int:
        if m not in spans:
            spans[m] = min(rel[i + m - 1] - rel[i] for i in range(n - m + 1)) + 1
        return spans[m]

    return min(K * q + min_span(-(-n // q)) for q in range(1, n + 1))


def _check_pregular_args(n: int, p: int, K: int) -> None:
    if n < 1 or p < 1 or K < 1:
        raise ValueError(f"n, p, K must all be >= 1, got n={n}, p={p}, K={K}")
