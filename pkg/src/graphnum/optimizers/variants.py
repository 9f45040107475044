"""The eight DE variants compared by the benchmark.

DERAND, DEBEST, OBDE and JADE follow their textbook forms. RBDE, DESPS, DESIM
and DCMAEA are compact re-statements of the cited methods; DCMAEA in
particular is a simplified surrogate that mixes DE/rand/1 with draws from a
Gaussian fitted to the better half of the population.
"""

from __future__ import annotations

import math
from collections import deque

import numpy as np

from .base import (
    DifferentialEvolution,
    _distinct,
    best1,
    rand1,
)

__all__ = [
    "DERand",
    "DEBest",
    "RBDE",
    "OBDE",
    "JADE",
    "DESPS",
    "DCMAEA",
    "DESIM",
    "VARIANTS",
    "rank_weights",
    "opposite",
    "dynamic_opposite",
    "nearest_neighbor",
    "sample_cauchy_f",
    "sample_normal_cr",
    "lehmer_mean",
    "elite_gaussian",
]


class DERand(DifferentialEvolution):
    name = "derand"

    def mutant(self, i):
        return rand1(self.pop, i, self.config.f, self.rng)


class DEBest(DifferentialEvolution):
    name = "debest"

    def begin_generation(self):
        self._best = self.best_index()

    def mutant(self, i):
        return best1(self.pop, self._best, i, self.config.f, self.rng)


def rank_weights(fitness: np.ndarray, rho: float) -> np.ndarray:
    """Selection probabilities proportional to ``(NP - rank + 1)**rho``, rank 1 = best."""
    np_ = len(fitness)
    ranks = np.empty(np_, dtype=float)
    ranks[np.argsort(fitness, kind="stable")] = np.arange(1, np_ + 1)
    w = (np_ - ranks + 1.0) ** rho
    return w / w.sum()


class RBDE(DifferentialEvolution):
    """DE/rand/1/bin with donors drawn by rank-biased probabilities."""

    name = "rbde"

    def begin_generation(self):
        self._cdf = np.cumsum(rank_weights(self.fit, self.config.rho))
        self._cdf[-1] = 1.0

    def _draw(self):
        return int(np.searchsorted(self._cdf, self.rng.random(), side="right"))

    def mutant(self, i):
        donors = []
        while len(donors) < 3:
            r = self._draw()
            if r != i and r not in donors:
                donors.append(r)
        r1, r2, r3 = donors
        return self.pop[r1] + self.config.f * (self.pop[r2] - self.pop[r3])


def opposite(points: np.ndarray) -> np.ndarray:
    return 1.0 - points


def dynamic_opposite(pop: np.ndarray) -> np.ndarray:
    """Reflect each coordinate inside the population's current bounding box."""
    return pop.min(axis=0) + pop.max(axis=0) - pop


class _OppositionInit:
    """Mixin: evaluate NP uniform points and their opposites, keep the best NP."""

    def initialize(self):
        points, values = self._evaluate_all(self.rng.random((self.config.pop_size, self.dim)))
        opp, opp_values = self._evaluate_all(opposite(points))
        self._keep_best(np.vstack([points, opp]), np.concatenate([values, opp_values]))


class OBDE(_OppositionInit, DERand):
    name = "obde"

    def end_generation(self):
        if self.budget.exhausted or self.rng.random() >= self.config.jump_rate:
            return
        opp, opp_values = self._evaluate_all(dynamic_opposite(self.pop))
        self._keep_best(np.vstack([self.pop, opp]), np.concatenate([self.fit, opp_values]))


def sample_cauchy_f(rng: np.random.Generator, mu: float, scale: float = 0.1) -> float:
    """Cauchy(mu, scale) redrawn until positive, truncated at 1."""
    while True:
        f = mu + scale * rng.standard_cauchy()
        if f > 0:
            return min(f, 1.0)


def sample_normal_cr(rng: np.random.Generator, mu: float, scale: float = 0.1) -> float:
    return float(np.clip(rng.normal(mu, scale), 0.0, 1.0))


def lehmer_mean(values) -> float:
    values = np.asarray(values, dtype=float)
    return float((values ** 2).sum() / values.sum())


class _Adaptive:
    """Mixin: per-individual F and CR sampled around means adapted from successes."""

    def _init_adaptation(self):
        self.mu_f = self.config.f
        self.mu_cr = self.config.cr

    def begin_generation(self):
        np_ = len(self.pop)
        self._f = [sample_cauchy_f(self.rng, self.mu_f) for _ in range(np_)]
        self._cr = [sample_normal_cr(self.rng, self.mu_cr) for _ in range(np_)]
        self._s_f: list[float] = []
        self._s_cr: list[float] = []

    def crossover_rate(self, i):
        return self._cr[i]

    def _record(self, i, survived):
        if survived:
            self._s_f.append(self._f[i])
            self._s_cr.append(self._cr[i])

    def end_generation(self):
        if self._s_f:
            c = self.config.adapt_rate
            self.mu_f = (1 - c) * self.mu_f + c * lehmer_mean(self._s_f)
            self.mu_cr = (1 - c) * self.mu_cr + c * float(np.mean(self._s_cr))


class JADE(_Adaptive, DifferentialEvolution):
    """current-to-pbest/1 with an archive of replaced parents."""

    name = "jade"

    def initialize(self):
        super().initialize()
        self._init_adaptation()
        self.archive: list[np.ndarray] = []
        self.archive_size = (
            self.config.pop_size if self.config.archive_size is None else self.config.archive_size
        )

    def begin_generation(self):
        super().begin_generation()
        top = max(1, int(round(self.config.p_best * len(self.pop))))
        self._top = np.argsort(self.fit, kind="stable")[:top]
        self._union = np.vstack([self.pop] + self.archive) if self.archive else self.pop

    def mutant(self, i):
        f = self._f[i]
        pbest = int(self._top[self.rng.integers(len(self._top))])
        (r1,) = _distinct(self.rng, len(self.pop), 1, (i,))
        (r2,) = _distinct(self.rng, len(self._union), 1, (i, r1))
        x = self.pop[i]
        return x + f * (self.pop[pbest] - x) + f * (self.pop[r1] - self._union[r2])

    def on_selection(self, i, survived, trial):
        self._record(i, survived)
        if survived and self.archive_size > 0:
            self.archive.append(self.pop[i].copy())
            if len(self.archive) > self.archive_size:
                self.archive.pop(int(self.rng.integers(len(self.archive))))


class DESPS(DERand):
    """DE/rand/1/bin that switches stagnating targets to donors from recent successes."""

    name = "desps"

    def initialize(self):
        super().initialize()
        self.failures = np.zeros(len(self.pop), dtype=int)
        self.successes: deque = deque(maxlen=self.config.pop_size)

    def mutant(self, i):
        if self.failures[i] > self.config.stagnation and len(self.successes) >= 3:
            a, b, c = _distinct(self.rng, len(self.successes), 3)
            s = self.successes
            return s[a] + self.config.f * (s[b] - s[c])
        return super().mutant(i)

    def on_selection(self, i, survived, trial):
        if survived:
            self.failures[i] = 0
            self.successes.append(trial.copy())
        else:
            self.failures[i] += 1


def elite_gaussian(pop: np.ndarray, fit: np.ndarray, jitter: float = 1e-12):
    """Mean and a square-root factor of the covariance of the better half.

    Returns ``(mean, factor, cov)`` with ``cov = factor @ factor.T`` up to the
    diagonal jitter, so ``mean + factor @ N(0, I)`` samples the Gaussian.
    """
    k = math.ceil(len(pop) / 2)
    elite = pop[np.argsort(fit, kind="stable")[:k]]
    mean = elite.mean(axis=0)
    centered = elite - mean
    cov = centered.T @ centered / max(k - 1, 1)
    w, v = np.linalg.eigh(cov)
    factor = v * np.sqrt(np.clip(w, 0.0, None) + jitter)
    return mean, factor, cov


class DCMAEA(DERand):
    """Simplified differential covariance adaptation surrogate."""

    name = "dcmaea"

    def begin_generation(self):
        self._mean, self._factor, _ = elite_gaussian(self.pop, self.fit)

    def mutant(self, i):
        p = self.config.cma_prob
        # no draw at p == 0 so the ablation consumes the same stream as DERAND
        if p > 0 and self.rng.random() < p:
            return self._mean + self._factor @ self.rng.standard_normal(self.dim)
        return super().mutant(i)


def nearest_neighbor(pop: np.ndarray, i: int) -> int:
    """Index of the Euclidean nearest neighbour of ``pop[i]``, lowest index on ties."""
    d = ((pop - pop[i]) ** 2).sum(axis=1)
    d[i] = np.inf
    return int(np.argmin(d))


class DESIM(_OppositionInit, _Adaptive, DifferentialEvolution):
    """Similarity-based mutation: pull towards the nearest neighbour, plus a random difference."""

    name = "desim"

    def initialize(self):
        super().initialize()
        self._init_adaptation()

    def mutant(self, i):
        f = self._f[i]
        sim = nearest_neighbor(self.pop, i)
        r1, r2 = _distinct(self.rng, len(self.pop), 2, (i,))
        x = self.pop[i]
        return x + f * (self.pop[sim] - x) + f * (self.pop[r1] - self.pop[r2])

    def on_selection(self, i, survived, trial):
        self._record(i, survived)


VARIANTS = {
    cls.name: cls for cls in (DESPS, OBDE, JADE, DCMAEA, DERand, DEBest, RBDE, DESIM)
}
