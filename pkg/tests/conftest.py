import itertools
from fractions import Fraction

import pytest

from graphnum.stats import midranks


def exact_ranksum_pvalue(a, b):
    """Exact two-sided rank-sum p-value by counting n1-subsets of the pooled midranks.

    Midranks are doubled to integers and the null distribution of the rank sum
    is built with a subset-sum dynamic program, so no normal approximation is
    involved.
    """
    pooled = list(a) + list(b)
    n1, n = len(a), len(pooled)
    twice = [int(round(2 * r)) for r in midranks(pooled)]
    # counts[k][s] = number of k-subsets with doubled rank sum s
    counts = [dict() for _ in range(n1 + 1)]
    counts[0][0] = 1
    for r in twice:
        for k in range(min(n1, n) - 1, -1, -1):
            for s, c in counts[k].items():
                counts[k + 1][s + r] = counts[k + 1].get(s + r, 0) + c
    dist = counts[n1]
    total = sum(dist.values())
    center = Fraction(n1 * (n + 1), 1)  # doubled mean rank sum
    observed = abs(sum(twice[:n1]) - center)
    extreme = sum(c for s, c in dist.items() if abs(s - center) >= observed)
    return extreme / total


def exact_ranksum_pvalue_bruteforce(a, b):
    pooled = list(a) + list(b)
    ranks = midranks(pooled)
    n1 = len(a)
    center = n1 * (len(pooled) + 1) / 2
    observed = abs(sum(ranks[:n1]) - center)
    sums = [sum(ranks[i] for i in idx) for idx in itertools.combinations(range(len(pooled)), n1)]
    return sum(abs(s - center) >= observed - 1e-9 for s in sums) / len(sums)


def exact_verdict(a, b, alpha=0.05):
    if exact_ranksum_pvalue(a, b) >= alpha:
        return "="
    ranks = midranks(list(a) + list(b))
    return "+" if sum(ranks[: len(a)]) < len(a) * (len(a) + len(b) + 1) / 2 else "-"


@pytest.fixture
def exact_oracle():
    return exact_verdict


ACCEPTANCE_LINES = []


@pytest.fixture
def report():
    """Record one PASS/FAIL line per acceptance criterion, then enforce it."""

    def record(number, ok, detail):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
