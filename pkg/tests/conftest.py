import itertools

from jrsched.generators import SplitMix64
from jrsched.model import Instance, validate_instance


def random_instance(rng: SplitMix64, n_max: int = 12, k_max: int = 5) -> Instance:
    """Random instance with gaps in [1, 3K], the standard randomized family."""
    K = rng.randint(1, k_max)
    n = rng.randint(1, n_max)
    releases = [0]
    for _ in range(n - 1):
        releases.append(releases[-1] + rng.randint(1, 3 * K))
    return validate_instance(releases, K)


def min_fmax_for_replenishments(releases, Q, window: int = 12):
    """Independent oracle: minimum achievable F_max for a fixed replenishment
    set, by exhaustive search over start assignments. Tiny inputs only."""
    n = len(releases)
    assert n <= 4, "oracle is exponential; keep it tiny"
    best = None
    ranges = [range(r, releases[-1] + window) for r in releases]
    for starts in itertools.product(*ranges):
        if len({*starts}) != n:
            continue
        if any(abs(a - b) < 1 for a, b in itertools.combinations(starts, 2)):
            continue
        if any(not any(r <= tau <= s for tau in Q) for r, s in zip(releases, starts)):
            continue
        fmax = max(s + 1 - r for r, s in zip(releases, starts))
        if best is None or fmax < best:
            best = fmax
    return best
