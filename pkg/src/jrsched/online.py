"""Discrete-time online simulation engine, policy interface, and policies.

The engine owns feasibility: a policy only ever sees a PolicyObservation and
answers WAIT or REPLENISH_AND_FLUSH. A flush replenishes at the current time
and starts all pending jobs back to back, after which time jumps over the
scheduled block; otherwise time advances one unit. Decisions are irreversible:
once a start or replenishment time is committed it is never revisited.

Releases arriving inside a block window are delivered at the first observation
after the jump. The source announces "no more jobs" together with the last
release; the trigger policy uses that signal only to stop, never to flush
early (an opt-in variant flushes early instead).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Iterable, NamedTuple

from .model import CostBreakdown, Instance, Solution, evaluate


class StreamError(ValueError):
    """Raised for malformed release streams (non-increasing, negative, empty)."""


class PolicyProtocolError(ValueError):
    """Raised when a policy breaks the action protocol."""


class DivergenceError(RuntimeError):
    """Raised when a policy makes no progress within a watchdog horizon."""


class PolicyAction(enum.Enum):
    WAIT = "wait"
    REPLENISH_AND_FLUSH = "replenish"


class PolicyObservation(NamedTuple):
    """Everything a policy may legally see at one integer time step."""

    now: int
    pending: tuple[tuple[int, int], ...]  # (job index, release), release order
    machine_free_at: int
    last_job_announced: bool
    f_max_so_far: int
    repl_count_so_far: int


Policy = Callable[[PolicyObservation], PolicyAction]


class TraceEvent(NamedTuple):
    time: int
    action: PolicyAction
    pending_size: int
    f_max_after: int


@dataclass(frozen=True)
class Trace:
    events: tuple[TraceEvent, ...]
    solution: Solution

    def lines(self) -> list[str]:
        """Line-oriented log, one decision per line."""
        return [
            f"t={e.time} action={e.action.value} pending={e.pending_size} fmax={e.f_max_after}"
            for e in self.events
        ]


def pending_fmax(pending, now: int, machine_free_at: int) -> int:
    """Maximum flow the pending jobs would incur if flushed back to back now.

    ``pending`` is release-ordered; the block starts at
    max(now, machine_free_at). Returns 0 when nothing is pending.
    """
    start = now if now > machine_free_at else machine_free_at
    worst = 0
    for k, (_, r) in enumerate(pending, start=1):
        f = start + k - r
        if f > worst:
            worst = f
    return worst


# --- release sources --------------------------------------------------------


class ReleaseSource:
    """Source of release dates, possibly adaptive.

    ``peek`` returns the next scheduled release or None if none is currently
    scheduled; ``finished`` says whether it is known that no job will ever
    arrive again. The engine invokes ``on_step`` at every decision point and
    ``on_flush`` after committing a flush, which is how adaptive sources react.
    """

    def peek(self) -> int | None:
        raise NotImplementedError

    def pop(self) -> int:
        raise NotImplementedError

    def finished(self) -> bool:
        raise NotImplementedError

    def on_step(self, now: int) -> None:
        pass

    def on_flush(self, time: int, starts: dict[int, int]) -> None:
        pass


class SequenceSource(ReleaseSource):
    """Fixed list of releases; the last item carries the end-of-input signal."""

    def __init__(self, releases: Iterable[int]):
        self._items = list(releases)
        self._pos = 0

    def peek(self) -> int | None:
        return self._items[self._pos] if self._pos < len(self._items) else None

    def pop(self) -> int:
        r = self._items[self._pos]
        self._pos += 1
        return r

    def finished(self) -> bool:
        return self._pos >= len(self._items)


def as_release_source(stream) -> ReleaseSource:
    return stream if isinstance(stream, ReleaseSource) else SequenceSource(stream)


# --- engine -----------------------------------------------------------------


def simulate(
    stream,
    policy: Policy,
    K: int,
    *,
    record_trace: bool = True,
    horizon: int | None = None,
) -> tuple[Solution, Trace, CostBreakdown]:
    """Run one irreversible simulation of ``policy`` against ``stream``.

    ``stream`` is an iterable of strictly increasing integer releases or a
    ReleaseSource. Returns the realized solution, the decision trace and the
    cost breakdown (the returned solution is evaluated, so it is feasible by
    construction). ``horizon`` caps absolute time as a divergence guard.
    """
    src = as_release_source(stream)
    t = 0
    free = 0
    f_max = 0
    pending: list[tuple[int, int]] = []
    releases: list[int] = []
    starts: dict[int, int] = {}
    repl_times: list[int] = []
    events: list[TraceEvent] = []

    while True:
        while (nxt := src.peek()) is not None and nxt <= t:
            if nxt < 0:
                raise StreamError(f"negative release {nxt}")
            if releases and nxt <= releases[-1]:
                raise StreamError(f"releases not strictly increasing: {nxt} after {releases[-1]}")
            src.pop()
            pending.append((len(releases), nxt))
            releases.append(nxt)
        announced = src.finished()
        if announced and not pending and src.peek() is None:
            break
        src.on_step(t)
        obs = PolicyObservation(t, tuple(pending), free, announced, f_max, len(repl_times))
        action = policy(obs)
        if action is PolicyAction.REPLENISH_AND_FLUSH:
            if not pending:
                raise PolicyProtocolError(f"replenish with no pending jobs at t={t}")
            repl_times.append(t)
            start0 = max(t, free)
            flushed = {}
            for off, (j, r) in enumerate(pending):
                starts[j] = start0 + off
                flushed[j] = start0 + off
                flow = start0 + off + 1 - r
                if flow > f_max:
                    f_max = flow
            free = start0 + len(pending)
            if record_trace:
                events.append(TraceEvent(t, action, len(pending), f_max))
            block = len(pending)
            pending.clear()
            src.on_flush(t, flushed)
            t += block
        elif action is PolicyAction.WAIT:
            if record_trace:
                events.append(TraceEvent(t, action, len(pending), f_max))
            t += 1
        else:
            raise PolicyProtocolError(f"policy returned {action!r}, expected a PolicyAction")
        if horizon is not None and t > horizon:
            raise DivergenceError(f"simulation passed horizon {horizon} with jobs outstanding")

    if not releases:
        raise StreamError("stream produced no jobs")
    inst = Instance(tuple(releases), K)
    solution = Solution(tuple(starts[j] for j in range(len(releases))), tuple(repl_times))
    breakdown = evaluate(inst, solution)
    trace = Trace(tuple(events), solution)
    return solution, trace, breakdown


# --- policies ---------------------------------------------------------------


class Algorithm1Policy:
    """Threshold trigger policy: flush when the pending block's would-be
    maximum flow reaches the running maximum plus K.

    Maintains its own running maximum, starting at 0 and advancing by exactly
    K per replenishment. The comparison uses >= rather than equality; with
    integral data the trigger quantity rises in unit steps and a fresh block
    never starts above the threshold, so the trigger fires at equality anyway.

    With ``flush_on_last`` set, the end-of-input notification triggers an
    immediate flush of any pending jobs (which can only lower the cost); the
    literal policy uses the notification only to stop.
    """

    def __init__(self, K: int, flush_on_last: bool = False):
        self.K = K
        self.f_max = 0
        self.flush_on_last = flush_on_last

    def __call__(self, obs: PolicyObservation) -> PolicyAction:
        if not obs.pending:
            return PolicyAction.WAIT
        fu = pending_fmax(obs.pending, obs.now, obs.machine_free_at)
        if fu >= self.f_max + self.K:
            self.f_max += self.K
            return PolicyAction.REPLENISH_AND_FLUSH
        if self.flush_on_last and obs.last_job_announced:
            if fu > self.f_max:
                self.f_max = fu
            return PolicyAction.REPLENISH_AND_FLUSH
        return PolicyAction.WAIT


class EagerPolicy:
    """Naive baseline: replenish as soon as anything is pending."""

    def __call__(self, obs: PolicyObservation) -> PolicyAction:
        if obs.pending:
            return PolicyAction.REPLENISH_AND_FLUSH
        return PolicyAction.WAIT


def algorithm1_policy(K: int) -> Algorithm1Policy:
    """Fresh stateful instance of the trigger policy."""
    return Algorithm1Policy(K)


POLICY_NAMES = ("algorithm1", "flush_on_last", "eager")


def make_policy(name: str, K: int) -> Policy:
    if name == "algorithm1":
        return Algorithm1Policy(K)
    if name == "flush_on_last":
        return Algorithm1Policy(K, flush_on_last=True)
    if name == "eager":
        return EagerPolicy()
    raise KeyError(f"unknown policy {name!r}; known: {', '.join(POLICY_NAMES)}")


# --- trace invariants -------------------------------------------------------


def algorithm1_trace_violations(trace: Trace, K: int, releases) -> dict[str, list[str]]:
    """Check a literal trigger-policy trace against its structural invariants.

    Returned keys (empty lists mean no violation):

    - ``flow_after_each_replenishment``: after the i-th replenishment the
      realized maximum flow equals K*i exactly, hence cumulative cost 2*K*i;
      this is also trigger exactness (no overshoot).
    - ``replenishment_gap_lower_bound``: tau_i - tau_{i-1} >= K*i with
      tau_0 = 0, for every i >= 1.
    - ``replenishment_gap_lower_bound_after_first``: the same bound restricted
      to where it is actually forced: i >= 2 always, and i = 1 only when the
      first release is at least 1 (a first job released at time 0 is started at
      K - 1, one short of the literal bound).
    - ``replenishment_gaps_strictly_increase``: tau_{i+1} - tau_i strictly
      exceeds tau_i - tau_{i-1}. This holds on evenly spaced and zero-slack
      spread-out inputs but not in general; see the next key for the property
      that does hold universally.
    - ``blocks_complete_before_next_replenishment``: the block started at tau_i
      finishes by tau_{i+1} (block length is at most K*i while the next gap is
      at least K*(i+1)).
    """
    flushes = [e for e in trace.events if e.action is PolicyAction.REPLENISH_AND_FLUSH]
    first_release = releases[0]
    out: dict[str, list[str]] = {
        "flow_after_each_replenishment": [],
        "replenishment_gap_lower_bound": [],
        "replenishment_gap_lower_bound_after_first": [],
        "replenishment_gaps_strictly_increase": [],
        "blocks_complete_before_next_replenishment": [],
    }
    prev_tau = 0
    prev_gap = None
    for i, ev in enumerate(flushes, start=1):
        if ev.f_max_after != K * i:
            out["flow_after_each_replenishment"].append(
                f"replenishment {i} at t={ev.time}: f_max {ev.f_max_after} != {K * i}"
            )
        gap = ev.time - prev_tau
        if gap < K * i:
            msg = f"replenishment {i} at t={ev.time}: gap {gap} < {K * i}"
            out["replenishment_gap_lower_bound"].append(msg)
            if i >= 2 or first_release >= 1:
                out["replenishment_gap_lower_bound_after_first"].append(msg)
        if prev_gap is not None and gap <= prev_gap:
            out["replenishment_gaps_strictly_increase"].append(
                f"replenishment {i} at t={ev.time}: gap {gap} <= previous gap {prev_gap}"
            )
        if i < len(flushes):
            nxt = flushes[i].time
            if ev.time + ev.pending_size > nxt:
                out["blocks_complete_before_next_replenishment"].append(
                    f"block at t={ev.time} of {ev.pending_size} jobs runs past next replenishment {nxt}"
                )
        prev_tau = ev.time
        prev_gap = gap
    return out
