"""Acceptance suite: one PASS/FAIL line per criterion, summarised at the end of the run."""

import itertools
import math
import random
import time

import numpy as np
import pytest

from conftest import exact_verdict
from graphnum.bench import derive_seed, generate_suite, run_experiment
from graphnum.combinatorics import binomial, rank_revdoor, unrank_revdoor
from graphnum.graph import Graph, class_size, decode_graph, encode_graph, relabel
from graphnum.objective import LabelingObjective, exhaustive_landscape, landscape_minimum
from graphnum.optimizers import ALGORITHMS, OptimizerConfig, run
from graphnum.combinatorics import integer_to_factoradic
from graphnum.stats import wilcoxon_ranksum

EXPLORATION = ("desps", "derand", "obde", "desim")
EXPLOITATION = ("debest", "rbde")
BENCH_SEEDS = (0, 1, 2)


def all_pairs(n):
    return [(u, v) for u in range(2, n + 1) for v in range(1, u)]


def random_graph(rnd, n, m=None):
    pairs = all_pairs(n)
    m = rnd.randint(0, len(pairs)) if m is None else m
    return Graph(n, tuple(rnd.sample(pairs, m)))


@pytest.fixture(scope="session")
def benchmarks():
    out = {}
    for seed in BENCH_SEEDS:
        started = time.monotonic()
        result = run_experiment(generate_suite(seed), OptimizerConfig(), runs=10)
        out[seed] = (result, time.monotonic() - started)
    return out


def test_criterion_01_codec_bijection(report):
    started = time.monotonic()
    bad = 0
    for n in (3, 4, 5):
        universe = binomial(n, 2)
        for m in range(universe + 1):
            ranks = set()
            for combo in itertools.combinations(range(1, universe + 1), m):
                r = rank_revdoor(combo, universe)
                ranks.add(r)
                bad += unrank_revdoor(r, universe, m) != combo
            bad += ranks != set(range(binomial(universe, m)))
    elapsed = time.monotonic() - started
    report(1, bad == 0 and elapsed < 5, f"{bad} failures, {elapsed:.2f}s")


def test_criterion_02_graph_round_trip(report):
    started = time.monotonic()
    bad = checked = 0
    for n in range(1, 6):
        pairs = all_pairs(n)
        for m in range(len(pairs) + 1):
            for edges in itertools.combinations(pairs, m):
                g = Graph(n, edges)
                bad += decode_graph(encode_graph(g)) != g
                checked += 1
    rnd = random.Random(12)
    for _ in range(1000):
        g = random_graph(rnd, rnd.randint(1, 12))
        bad += decode_graph(encode_graph(g)) != g
        checked += 1
    elapsed = time.monotonic() - started
    report(2, bad == 0 and elapsed < 30, f"{checked} graphs, {bad} failures, {elapsed:.2f}s")


def test_criterion_03_rank_bound(report):
    rnd = random.Random(3)
    bad = 0
    for _ in range(1000):
        g = random_graph(rnd, rnd.randint(1, 20))
        code = encode_graph(g)
        bad += not 0 <= code.g <= class_size(g.n, g.m) - 1
    report(3, bad == 0, f"1000 graphs, {bad} out of range")


def test_criterion_04_landscape_cardinality(report):
    rnd = random.Random(4)
    sizes = {len(exhaustive_landscape(random_graph(rnd, 5))) for _ in range(20)}
    report(4, sizes == {120}, f"landscape sizes {sorted(sizes)}")


def test_criterion_05_isomorphism_invariance(report):
    rnd = random.Random(5)
    bad = 0
    for _ in range(20):
        g = random_graph(rnd, 5)
        reference = sorted(LabelingObjective(g).rank(integer_to_factoradic(x, 5)) for x in range(120))
        for _ in range(5):
            perm = list(range(1, 6))
            rnd.shuffle(perm)
            h = relabel(g, perm)
            ranks = sorted(LabelingObjective(h).rank(integer_to_factoradic(x, 5)) for x in range(120))
            bad += ranks != reference
    report(5, bad == 0, f"100 relabelings, {bad} mismatches")


def test_criterion_06_small_instance_optimality(report):
    # Instances and seeds fixed up front: m drawn in [2, 8] from a dedicated generator.
    started = time.monotonic()
    rng = np.random.default_rng(5)
    pairs = all_pairs(5)
    instances = []
    for _ in range(5):
        m = int(rng.integers(2, 9))
        picks = rng.choice(len(pairs), size=m, replace=False)
        instances.append(Graph(5, tuple(pairs[int(k)] for k in picks)))
    hits = {a: [] for a in ALGORITHMS}
    for k, g in enumerate(instances, start=1):
        _, target = landscape_minimum(exhaustive_landscape(g))
        for a in ALGORITHMS:
            count = 0
            for r in range(10):
                cfg = OptimizerConfig(algorithm=a, max_evals=1000, pop_size=10, cr=0.5, f=0.7,
                                      seed=derive_seed(0, a, k, r))
                count += run(cfg, g).best_L == target
            hits[a].append(count)
    elapsed = time.monotonic() - started
    ok = all(c >= 9 for v in hits.values() for c in v)
    worst = min((c, a) for a, v in hits.items() for c in v)
    report(6, ok, f"worst {worst[0]}/10 ({worst[1]}), per-instance hits {hits}, {elapsed:.1f}s")


def test_criterion_07_trace_invariants(report, benchmarks):
    result, _ = benchmarks[0]
    traces = list(result.traces.values())
    bad = sum(len(t) != 1000 or bool(np.any(np.diff(t) > 0)) for t in traces)
    bad += sum(e != 1000 for e in result.evaluations.values())
    report(7, len(traces) == 1600 and bad == 0, f"{len(traces)} traces, {bad} violations")


def test_criterion_08_wilcoxon(report):
    mismatches = corpus = 0
    for n1 in range(1, 6):
        for n2 in range(1, 6):
            pool = range(n1 + n2)
            for idx in itertools.combinations(pool, n1):
                a = [float(i) for i in idx]
                b = [float(i) for i in pool if i not in idx]
                corpus += 1
                mismatches += wilcoxon_ranksum(a, b) != exact_verdict(a, b)
    rnd = random.Random(8)
    agree = 0
    for _ in range(200):
        shift = rnd.choice([0.0, 0.5, 1.0, 1.5])
        a = [rnd.gauss(0, 1) for _ in range(10)]
        b = [rnd.gauss(shift, 1) for _ in range(10)]
        agree += wilcoxon_ranksum(a, b) == exact_verdict(a, b)
    examples = (
        wilcoxon_ranksum([1, 2, 3], [10, 11, 12]) == "="
        and wilcoxon_ranksum(list(range(10)), list(range(100, 110))) == "+"
    )
    ok = mismatches == 0 and agree >= 190 and examples
    report(8, ok, f"small corpus {corpus - mismatches}/{corpus}, size-10 {agree}/200, worked examples {examples}")


def test_criterion_09_exploration_beats_exploitation(report, benchmarks):
    from graphnum.bench import compare

    wins = []
    detail = []
    for seed in BENCH_SEEDS:
        result, _ = benchmarks[seed]
        _, counts = compare(result.finals(), result.algorithms, result.instance_ids)
        explore = sum(counts[a][0] for a in EXPLORATION)
        exploit = sum(counts[a][0] for a in EXPLOITATION)
        wins.append(explore > exploit)
        detail.append(f"seed {seed}: {explore} vs {exploit}")
    report(9, sum(wins) >= 2, "; ".join(detail))


def test_criterion_10_convergence_and_runtime(report, benchmarks):
    result, elapsed = benchmarks[0]
    bad = []
    for i in result.instance_ids:
        for a in result.algorithms:
            mean = result.mean_trace(i, a)
            if not mean[999] <= mean[199]:
                bad.append((i, a))
    ok = not bad and elapsed <= 30 * 60
    report(10, ok, f"{len(bad)} regressions, full benchmark {elapsed:.0f}s")
