"""Deterministic, seeded instance generators for every input class used here.

Randomness comes from SplitMix64 (Steele/Lea/Flood mix constants), a 64-bit
counter-based generator: output j of seed s is mix64(s + (j+1) * GOLDEN). That
makes streams splittable in O(1) - per-instance seeds are derived from a
master seed and an instance index - and outputs bit-reproducible given IEEE-754
doubles (the geometric sampler additionally relies on the platform's double
precision log; the shipped golden files pin the expected outputs).

Geometric gaps are sampled by inverse CDF: gap = ceil(ln(U) / ln(1 - beta))
clamped to >= 1, with U uniform on (0, 1] built from the top 53 bits of one
64-bit draw. One draw per gap.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .model import Instance, validate_instance

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    """SplitMix64 finalizer: bijective 64-bit avalanche mix."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """Counter-based 64-bit PRNG; identical output for identical seeds."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        return mix64(self._state)

    def next_unit(self) -> float:
        """Uniform double in (0, 1]: (top53bits + 1) * 2**-53."""
        return ((self.next_u64() >> 11) + 1) * 2.0**-53

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi] via unbiased rejection sampling."""
        span = hi - lo + 1
        limit = (_MASK64 + 1) - (_MASK64 + 1) % span
        while True:
            v = self.next_u64()
            if v < limit:
                return lo + v % span


def derive_seed(master_seed: int, index: int) -> int:
    """Per-instance seed: output ``index`` of the master SplitMix64 stream."""
    return mix64((master_seed + (index + 1) * _GOLDEN) & _MASK64)


class GenKind(enum.Enum):
    REGULAR = "regular"
    PREGULAR = "pregular"
    SPARSE = "sparse"
    PBOUNDED_UNIFORM = "pbounded_uniform"
    GEOMETRIC = "geometric"


@dataclass(frozen=True)
class GenSpec:
    """Parameters of one generated instance; only the fields a kind uses apply."""

    kind: GenKind
    n: int
    K: int
    p: int | None = None
    beta: float | None = None
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.K < 1:
            raise ValueError(f"K must be >= 1, got {self.K}")
        if self.kind in (GenKind.PREGULAR, GenKind.PBOUNDED_UNIFORM):
            if self.p is None or self.p < 1:
                raise ValueError(f"kind {self.kind.value} needs p >= 1, got {self.p}")
        if self.kind is GenKind.GEOMETRIC:
            if self.beta is None or not 0.0 < self.beta < 1.0:
                raise ValueError(f"kind geometric needs beta in (0, 1), got {self.beta}")


def gen_pregular(n: int, p: int) -> tuple[int, ...]:
    """Releases 0, p, 2p, ..., (n-1)p; p = 1 is the regular input."""
    if n < 1 or p < 1:
        raise ValueError(f"n and p must be >= 1, got n={n}, p={p}")
    return tuple(i * p for i in range(n))


def gen_sparse(n: int, K: int, slack=None) -> tuple[int, ...]:
    """Releases with gap j of K*j plus a non-negative slack (default 0).

    Satisfies the spread-out predicate r_{j+1} - r_j >= K*j by construction;
    this input class is the worst case for the trigger policy.
    """
    if n < 1 or K < 1:
        raise ValueError(f"n and K must be >= 1, got n={n}, K={K}")
    if slack is None:
        slack = [0] * (n - 1)
    slack = list(slack)
    if len(slack) != n - 1:
        raise ValueError(f"need {n - 1} slack values, got {len(slack)}")
    if any(s < 0 for s in slack):
        raise ValueError("slack values must be non-negative")
    releases = [0]
    for j in range(1, n):
        releases.append(releases[-1] + K * j + slack[j - 1])
    return tuple(releases)


def gen_pbounded_uniform(n: int, p: int, seed: int) -> tuple[int, ...]:
    """First release 0, then gaps uniform on {1..p}; p = 1 forces the regular input."""
    if n < 1 or p < 1:
        raise ValueError(f"n and p must be >= 1, got n={n}, p={p}")
    rng = SplitMix64(seed)
    releases = [0]
    for _ in range(n - 1):
        releases.append(releases[-1] + rng.randint(1, p))
    return tuple(releases)


def gen_geometric(n: int, beta: float, seed: int) -> tuple[int, ...]:
    """Releases r_j = X_1 + ... + X_j with X geometric(beta) on {1, 2, ...}."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 0.0 < beta < 1.0:
        raise ValueError(f"beta must be in (0, 1), got {beta}")
    rng = SplitMix64(seed)
    denom = math.log(1.0 - beta)
    releases = []
    total = 0
    for _ in range(n):
        u = rng.next_unit()
        gap = math.ceil(math.log(u) / denom)
        if gap < 1:
            gap = 1
        total += gap
        releases.append(total)
    return tuple(releases)


def generate(spec: GenSpec) -> Instance:
    if spec.kind is GenKind.REGULAR:
        releases = gen_pregular(spec.n, 1)
    elif spec.kind is GenKind.PREGULAR:
        releases = gen_pregular(spec.n, spec.p)
    elif spec.kind is GenKind.SPARSE:
        releases = gen_sparse(spec.n, spec.K)
    elif spec.kind is GenKind.PBOUNDED_UNIFORM:
        releases = gen_pbounded_uniform(spec.n, spec.p, spec.seed)
    elif spec.kind is GenKind.GEOMETRIC:
        releases = gen_geometric(spec.n, spec.beta, spec.seed)
    else:  # pragma: no cover
        raise ValueError(f"unknown kind {spec.kind!r}")
    return validate_instance(releases, spec.K)


# --- class predicates -------------------------------------------------------


def is_pregular(releases, p: int) -> bool:
    return all(b - a == p for a, b in zip(releases, releases[1:]))


def is_pbounded(releases, p: int) -> bool:
    return all(1 <= b - a <= p for a, b in zip(releases, releases[1:]))


def is_sparse(releases, K: int) -> bool:
    return all(b - a >= K * (j + 1) for j, (a, b) in enumerate(zip(releases, releases[1:])))
