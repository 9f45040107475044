import itertools
import math
import random

import pytest
from hypothesis import given, strategies as st

from conftest import exact_ranksum_pvalue, exact_ranksum_pvalue_bruteforce, exact_verdict
from graphnum.exceptions import DomainError
from graphnum.stats import (
    count_performance,
    midranks,
    pairwise_verdicts,
    ranksum_test,
    wilcoxon_ranksum,
)


def tie_free_corpus(max_size=5):
    """Every split of 1..n1+n2 into samples of sizes n1, n2 <= max_size."""
    for n1 in range(1, max_size + 1):
        for n2 in range(1, max_size + 1):
            pool = range(n1 + n2)
            for idx in itertools.combinations(pool, n1):
                yield [float(i) for i in idx], [float(i) for i in pool if i not in idx]


def test_midranks():
    assert midranks([3.0, 1.0, 3.0, 2.0]) == [3.5, 1.0, 3.5, 2.0]
    assert midranks([5, 5, 5]) == [2.0, 2.0, 2.0]


def test_dp_oracle_matches_enumeration():
    rnd = random.Random(0)
    for _ in range(300):
        a = [rnd.randint(0, 5) for _ in range(rnd.randint(1, 5))]
        b = [rnd.randint(0, 5) for _ in range(rnd.randint(1, 5))]
        assert float(exact_ranksum_pvalue(a, b)) == pytest.approx(exact_ranksum_pvalue_bruteforce(a, b))


def test_identical_samples():
    assert wilcoxon_ranksum([1.0, 2.0, 3.0], [1.0, 2.0, 3.0]) == "="
    assert wilcoxon_ranksum([2.0] * 10, [2.0] * 10) == "="
    assert ranksum_test([2.0] * 4, [2.0] * 3)[2] == 1.0


def test_three_vs_three_separated():
    assert exact_ranksum_pvalue([1, 2, 3], [10, 11, 12]) == pytest.approx(0.1)
    assert wilcoxon_ranksum([1, 2, 3], [10, 11, 12]) == "="


def test_ten_vs_ten_separated():
    a, b = list(range(10)), list(range(100, 110))
    assert float(exact_ranksum_pvalue(a, b)) == pytest.approx(2 / math.comb(20, 10))
    assert wilcoxon_ranksum(a, b) == "+"
    assert wilcoxon_ranksum(b, a) == "-"


def test_normal_approximation_values():
    # U = 0, mean 12.5, variance 25 * 11 / 12
    u, z, p = ranksum_test(list(range(5)), list(range(5, 10)))
    assert u == 0
    assert z == pytest.approx(12.0 / math.sqrt(25 * 11 / 12))
    assert p == pytest.approx(math.erfc(z / math.sqrt(2)))


def test_agrees_with_exact_on_all_tie_free_small_pairs():
    pairs = list(tie_free_corpus())
    assert len(pairs) == 912
    mismatches = [(a, b) for a, b in pairs if wilcoxon_ranksum(a, b) != exact_verdict(a, b)]
    assert mismatches == []


def test_tied_small_pairs_mostly_agree():
    # Heavy ties at n <= 5 can flip decisions whose exact p sits right at alpha.
    rnd = random.Random(1)
    agree = 0
    for _ in range(1000):
        a = [rnd.randint(0, 6) for _ in range(rnd.randint(2, 5))]
        b = [rnd.randint(0, 6) + rnd.choice([0, 2, 4]) for _ in range(rnd.randint(2, 5))]
        if wilcoxon_ranksum(a, b) == exact_verdict(a, b):
            agree += 1
        else:
            assert 0.025 <= float(exact_ranksum_pvalue(a, b)) <= 0.08
            assert 0.025 <= ranksum_test(a, b)[2] <= 0.08
    assert agree >= 950


def test_size_ten_agreement():
    rnd = random.Random(2)
    agree = 0
    for _ in range(200):
        shift = rnd.choice([0.0, 0.5, 1.0, 1.5])
        a = [rnd.gauss(0, 1) for _ in range(10)]
        b = [rnd.gauss(shift, 1) for _ in range(10)]
        agree += wilcoxon_ranksum(a, b) == exact_verdict(a, b)
    assert agree >= 190


def test_empty_sample():
    with pytest.raises(DomainError):
        wilcoxon_ranksum([], [1.0])


@given(
    st.lists(st.integers(0, 8), min_size=2, max_size=12),
    st.lists(st.integers(0, 8), min_size=2, max_size=12),
)
def test_antisymmetry(a, b):
    flip = {"+": "-", "-": "+", "=": "="}
    assert wilcoxon_ranksum(b, a) == flip[wilcoxon_ranksum(a, b)]


def test_counting():
    finals = {(1, "x"): [1.0, 1.0], (1, "y"): [1.0, 1.0]}
    verdicts = pairwise_verdicts(finals, ["x", "y"], [1])
    assert count_performance(verdicts, ["x", "y"]) == {"x": (0, 1, 0), "y": (0, 1, 0)}


def test_counting_invariants():
    rnd = random.Random(3)
    algos = [f"a{k}" for k in range(8)]
    finals = {
        (i, a): [rnd.gauss(k * 0.3, 1) for _ in range(10)]
        for i in range(1, 21)
        for k, a in enumerate(algos)
    }
    verdicts = pairwise_verdicts(finals, algos, range(1, 21))
    counts = count_performance(verdicts, algos)
    assert all(sum(c) == 140 for c in counts.values())
    assert sum(c[0] for c in counts.values()) == sum(c[2] for c in counts.values())
    for (i, a, b), v in verdicts.items():
        assert {"+": "-", "-": "+", "=": "="}[v] == verdicts[(i, b, a)]
