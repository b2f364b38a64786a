"""Problem data model: instances, solutions, feasibility and cost.

A job is a unit-length task with an integer release date, processed once on a
single machine. Starting job j at time S requires a replenishment at some time
tau with r_j <= tau <= S; each replenishment costs K. The cost of a solution is
K * (number of replenishments) + max_j (S_j + 1 - r_j).

Everything in this module is exact integer arithmetic. Python integers are
unbounded, so there is no overflow to worry about; malformed data raises an
error instead of wrapping.
"""

from __future__ import annotations

import json
from bisect import bisect_left
from dataclasses import dataclass


class InstanceError(ValueError):
    """Raised when releases/K do not form a valid instance."""


class SolutionError(ValueError):
    """Raised when a solution is malformed or infeasible for an instance.

    ``job_index`` identifies the offending job where one exists.
    """

    def __init__(self, message: str, job_index: int | None = None):
        super().__init__(message)
        self.job_index = job_index


class InfeasibleReplenishmentsError(ValueError):
    """Raised when a replenishment set cannot cover some job."""

    def __init__(self, message: str, job_index: int | None = None):
        super().__init__(message)
        self.job_index = job_index


def _check_releases(releases: tuple[int, ...]) -> None:
    if not releases:
        raise InstanceError("instance must contain at least one job")
    for r in releases:
        if not isinstance(r, int) or isinstance(r, bool):
            raise InstanceError(f"release {r!r} is not an integer")
        if r < 0:
            raise InstanceError(f"negative release date {r}")
    for a, b in zip(releases, releases[1:]):
        if a == b:
            raise InstanceError(f"duplicate release date {a}")
        if a > b:
            raise InstanceError(f"releases not increasing: {a} before {b}")


@dataclass(frozen=True)
class Instance:
    """Strictly increasing non-negative integer release dates plus cost K."""

    releases: tuple[int, ...]
    K: int

    def __post_init__(self):
        object.__setattr__(self, "releases", tuple(self.releases))
        _check_releases(self.releases)
        if not isinstance(self.K, int) or isinstance(self.K, bool) or self.K < 1:
            raise InstanceError(f"replenishment cost K must be an integer >= 1, got {self.K!r}")

    @property
    def n(self) -> int:
        return len(self.releases)

    def span(self) -> int:
        return self.releases[-1] - self.releases[0]

    def max_gap(self) -> int:
        """Largest gap between consecutive releases (0 for a single job)."""
        rel = self.releases
        return max((b - a for a, b in zip(rel, rel[1:])), default=0)


@dataclass(frozen=True)
class GeneralInstance:
    """Jobs with arbitrary positive processing times, strictly increasing releases."""

    jobs: tuple[tuple[int, int], ...]  # (release, processing_time)

    def __post_init__(self):
        object.__setattr__(self, "jobs", tuple((int(r), int(p)) for r, p in self.jobs))
        if not self.jobs:
            raise InstanceError("general instance must contain at least one job")
        for r, p in self.jobs:
            if r < 0:
                raise InstanceError(f"negative release date {r}")
            if p < 1:
                raise InstanceError(f"processing time must be >= 1, got {p}")
        for (r1, _), (r2, _) in zip(self.jobs, self.jobs[1:]):
            if r1 >= r2:
                raise InstanceError(f"releases not strictly increasing: {r1} before {r2}")


@dataclass(frozen=True)
class Solution:
    """One start time per job plus the replenishment time set, both integers.

    Feasibility against a concrete instance (release respect, non-overlap,
    coverage) is checked by :func:`evaluate`; this type only guards its own
    shape.
    """

    starts: tuple[int, ...]
    replenishments: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "starts", tuple(self.starts))
        object.__setattr__(self, "replenishments", tuple(self.replenishments))
        if not self.replenishments:
            raise SolutionError("solution needs at least one replenishment")
        for a, b in zip(self.replenishments, self.replenishments[1:]):
            if a >= b:
                raise SolutionError(f"replenishments not strictly increasing: {a} before {b}")

    @property
    def q(self) -> int:
        return len(self.replenishments)


@dataclass(frozen=True)
class CostBreakdown:
    """Per-job flow times and the two cost components."""

    flow_times: tuple[int, ...]
    f_max: int
    repl_count: int
    total: int  # K * repl_count + f_max


def validate_instance(releases, K: int) -> Instance:
    """Build an Instance, raising InstanceError on any invariant violation."""
    return Instance(tuple(releases), K)


def asap_schedule(inst: Instance, replenishments) -> Solution:
    """Schedule jobs in release order, each as early as the replenishments allow.

    Job j starts at max(previous completion, earliest replenishment >= r_j).
    Among all schedules using this replenishment set, every completion time is
    minimal, hence so is the maximum flow time.
    """
    Q = tuple(replenishments)
    if not Q:
        raise InfeasibleReplenishmentsError("empty replenishment set")
    for a, b in zip(Q, Q[1:]):
        if a >= b:
            raise InfeasibleReplenishmentsError(f"replenishments not strictly increasing: {a} before {b}")
    rel = inst.releases
    if Q[-1] < rel[-1]:
        # the last job is the first one that cannot be covered
        raise InfeasibleReplenishmentsError(
            f"job {len(rel) - 1} (release {rel[-1]}) has no replenishment at or after its release",
            job_index=len(rel) - 1,
        )
    starts = []
    ptr = 0
    prev_completion = None
    for r in rel:
        while Q[ptr] < r:
            ptr += 1
        tau = Q[ptr]
        s = tau if prev_completion is None else max(prev_completion, tau)
        starts.append(s)
        prev_completion = s + 1
    return Solution(tuple(starts), Q)


def evaluate(inst: Instance, sol: Solution) -> CostBreakdown:
    """Check feasibility of ``sol`` for ``inst`` and compute its cost.

    Raises SolutionError naming the offending job for a start before release,
    an overlap, or a job with no covering replenishment.
    """
    rel = inst.releases
    starts = sol.starts
    Q = sol.replenishments
    if len(starts) != len(rel):
        raise SolutionError(f"expected {len(rel)} start times, got {len(starts)}")
    for j, (r, s) in enumerate(zip(rel, starts)):
        if s < r:
            raise SolutionError(f"job {j} starts at {s} before its release {r}", job_index=j)
    order = sorted(range(len(starts)), key=lambda j: starts[j])
    for a, b in zip(order, order[1:]):
        if starts[b] - starts[a] < 1:
            raise SolutionError(
                f"job {b} (start {starts[b]}) overlaps job {a} (start {starts[a]})", job_index=b
            )
    for j, (r, s) in enumerate(zip(rel, starts)):
        i = bisect_left(Q, r)
        if i == len(Q) or Q[i] > s:
            raise SolutionError(
                f"job {j} has no replenishment in [{r}, {s}]", job_index=j
            )
    flows = tuple(s + 1 - r for r, s in zip(rel, starts))
    f_max = max(flows)
    return CostBreakdown(flows, f_max, len(Q), inst.K * len(Q) + f_max)


def to_general(releases) -> GeneralInstance:
    """Merge a non-decreasing release multiset into one job per distinct time.

    Each group of equal releases at time t becomes a single job with release t
    and processing time equal to the group size.
    """
    rel = list(releases)
    if not rel:
        raise InstanceError("instance must contain at least one job")
    for a, b in zip(rel, rel[1:]):
        if a > b:
            raise InstanceError(f"releases not non-decreasing: {a} before {b}")
    jobs = []
    for r in rel:
        if jobs and jobs[-1][0] == r:
            jobs[-1][1] += 1
        else:
            jobs.append([r, 1])
    return GeneralInstance(tuple((r, p) for r, p in jobs))


def to_unit(gen: GeneralInstance) -> tuple[int, ...]:
    """Expand each job of a general instance into p unit jobs at its release."""
    out = []
    for r, p in gen.jobs:
        out.extend([r] * p)
    return tuple(out)


def bracket_inputs(inst: Instance, p: int) -> tuple[Instance, Instance]:
    """Dense and p-regular comparison instances over ``inst``'s window, same K.

    Requires consecutive release gaps of at most p. The dense instance has a
    release at every integer in [t_min, t]; the regular one every p units
    starting at t_min, not exceeding t. The dense instance contains this one,
    so its optimum is an upper bound on OPT(inst). The regular instance's
    optimum is usually, but not always, a lower bound: an instance can beat
    the even spreading by clustering jobs (smallest counterexample: releases
    (0, 1, 3, 4) with K = 2 cost 6, against 7 for (0, 2, 4)).
    """
    if p < 1:
        raise InstanceError(f"p must be >= 1, got {p}")
    rel = inst.releases
    for a, b in zip(rel, rel[1:]):
        if b - a > p:
            raise InstanceError(f"instance is not {p}-bounded: gap {b - a} between {a} and {b}")
    t_min, t = rel[0], rel[-1]
    dense = Instance(tuple(range(t_min, t + 1)), inst.K)
    sparse_regular = Instance(tuple(range(t_min, t + 1, p)), inst.K)
    return dense, sparse_regular


# --- text interchange -------------------------------------------------------
#
# Instance text format, one instance per line:  K;r_1,r_2,...,r_n
# Solution interchange is a JSON record with fields "starts" and
# "replenishments".


def format_instance_line(inst: Instance) -> str:
    return f"{inst.K};{','.join(str(r) for r in inst.releases)}"


def parse_instance_line(line: str) -> Instance:
    body = line.strip()
    try:
        k_part, rel_part = body.split(";")
        K = int(k_part)
        releases = tuple(int(x) for x in rel_part.split(","))
    except (ValueError, TypeError) as exc:
        raise InstanceError(f"cannot parse instance line {line!r}: expected 'K;r1,r2,...'") from exc
    return validate_instance(releases, K)


def parse_instances(text: str) -> list[Instance]:
    """Parse an instance file body; blank lines and '#' comments are skipped."""
    out = []
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        out.append(parse_instance_line(stripped))
    return out


def solution_to_record(sol: Solution) -> dict:
    return {"starts": list(sol.starts), "replenishments": list(sol.replenishments)}


def solution_from_record(record: dict) -> Solution:
    try:
        return Solution(tuple(record["starts"]), tuple(record["replenishments"]))
    except (KeyError, TypeError) as exc:
        raise SolutionError(f"bad solution record: {exc}") from exc


def solution_to_json(sol: Solution) -> str:
    return json.dumps(solution_to_record(sol))


def solution_from_json(text: str) -> Solution:
    return solution_from_record(json.loads(text))
