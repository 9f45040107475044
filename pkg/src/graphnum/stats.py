"""Two-sided Wilcoxon rank-sum comparison and +/=/- performance counting."""

from __future__ import annotations

import math
from collections import Counter
from typing import Iterable, Mapping, Sequence

from .exceptions import DomainError

__all__ = [
    "midranks",
    "ranksum_test",
    "wilcoxon_ranksum",
    "pairwise_verdicts",
    "count_performance",
]

BETTER, EQUAL, WORSE = "+", "=", "-"
_FLIP = {BETTER: WORSE, WORSE: BETTER, EQUAL: EQUAL}


def midranks(values: Sequence[float]) -> list[float]:
    """1-based ranks with ties sharing the mean of their positions."""
    order = sorted(range(len(values)), key=values.__getitem__)
    ranks = [0.0] * len(values)
    start = 0
    while start < len(order):
        stop = start
        while stop + 1 < len(order) and values[order[stop + 1]] == values[order[start]]:
            stop += 1
        shared = (start + stop) / 2.0 + 1.0
        for k in range(start, stop + 1):
            ranks[order[k]] = shared
        start = stop + 1
    return ranks


def ranksum_test(a: Sequence[float], b: Sequence[float]) -> tuple[float, float, float]:
    """Return ``(U_a, z, p)`` for the two-sided Mann-Whitney test.

    Uses the normal approximation with tie-corrected variance and a 0.5
    continuity correction. When every value is tied the variance is zero and
    ``(U_a, 0.0, 1.0)`` is returned.
    """
    n1, n2 = len(a), len(b)
    if n1 == 0 or n2 == 0:
        raise DomainError("rank-sum test needs two non-empty samples")
    pooled = list(a) + list(b)
    ranks = midranks(pooled)
    u = sum(ranks[:n1]) - n1 * (n1 + 1) / 2.0
    n = n1 + n2
    ties = sum(t ** 3 - t for t in Counter(pooled).values())
    var = n1 * n2 / 12.0 * ((n + 1) - ties / (n * (n - 1)))
    if var <= 0:
        return u, 0.0, 1.0
    dev = max(abs(u - n1 * n2 / 2.0) - 0.5, 0.0)
    z = dev / math.sqrt(var)
    return u, z, math.erfc(z / math.sqrt(2.0))


def wilcoxon_ranksum(a: Sequence[float], b: Sequence[float], alpha: float = 0.05) -> str:
    """``'+'`` if ``a`` is significantly lower (better), ``'-'`` if higher, else ``'='``."""
    u, _, p = ranksum_test(a, b)
    if p >= alpha:
        return EQUAL
    return BETTER if u < len(a) * len(b) / 2.0 else WORSE


def pairwise_verdicts(
    finals: Mapping[tuple[int, str], Sequence[float]],
    algorithms: Sequence[str],
    instances: Iterable[int],
    alpha: float = 0.05,
) -> dict[tuple[int, str, str], str]:
    """Verdict of every ordered algorithm pair on every instance.

    ``finals[(instance, algorithm)]`` holds the final objective of each run.
    Each unordered pair is tested once and mirrored, so the verdicts are
    antisymmetric by construction.
    """
    out = {}
    for inst in instances:
        for i, a in enumerate(algorithms):
            for b in algorithms[i + 1:]:
                v = wilcoxon_ranksum(finals[(inst, a)], finals[(inst, b)], alpha)
                out[(inst, a, b)] = v
                out[(inst, b, a)] = _FLIP[v]
    return out


def count_performance(
    verdicts: Mapping[tuple[int, str, str], str], algorithms: Sequence[str]
) -> dict[str, tuple[int, int, int]]:
    """Accumulate (outperform, equal, underperform) counts per algorithm."""
    counts = {a: [0, 0, 0] for a in algorithms}
    slot = {BETTER: 0, EQUAL: 1, WORSE: 2}
    for (_, a, _), v in verdicts.items():
        counts[a][slot[v]] += 1
    return {a: tuple(c) for a, c in counts.items()}
