"""Shared Differential Evolution machinery over the unit box.

Search points live in ``[0, 1]**(n - 1)`` and decode to factoradic codes by
truncation, so every box point is a valid node relabeling. A run consumes
exactly ``max_evals`` objective evaluations; the final generation is cut short
when the budget runs out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields
from typing import Callable, NamedTuple, Sequence

import numpy as np

from ..exceptions import ValidationError

__all__ = [
    "ALGORITHMS",
    "RNG_NAME",
    "OptimizerConfig",
    "Individual",
    "RunTrace",
    "Budget",
    "point_to_factoradic",
    "clamp",
    "repair",
    "rand1",
    "best1",
    "mutate_derand",
    "mutate_debest",
    "crossover_binomial",
    "select_greedy",
    "DifferentialEvolution",
]

REPAIRS = ("clamp", "midpoint", "random")
ALGORITHMS = ("desps", "obde", "jade", "dcmaea", "derand", "debest", "rbde", "desim")
RNG_NAME = "numpy.PCG64"


@dataclass(frozen=True)
class OptimizerConfig:
    """Parameters of one optimizer run.

    Defaults follow the benchmark protocol (NP=10, CR=0.5, F=0.7, rho=3,
    1000 evaluations). Variant-specific knobs are ignored by variants that do
    not use them.
    """

    algorithm: str = "derand"
    pop_size: int = 10
    cr: float = 0.5
    f: float = 0.7
    rho: float = 3.0
    max_evals: int = 1000
    seed: int = 0
    # JADE / DESIM
    p_best: float = 0.1
    adapt_rate: float = 0.1
    archive_size: int | None = None
    # OBDE
    jump_rate: float = 0.3
    # DESPS
    stagnation: int = 32
    # DCMAEA
    cma_prob: float = 0.5
    repair: str = "clamp"

    def validate(self) -> "OptimizerConfig":
        if self.algorithm not in ALGORITHMS:
            raise ValidationError(
                f"unknown algorithm {self.algorithm!r}; valid names: {', '.join(ALGORITHMS)}"
            )
        if self.pop_size < 4:
            raise ValidationError(f"pop_size must be >= 4, got {self.pop_size}")
        if not 0.0 <= self.cr <= 1.0:
            raise ValidationError(f"cr must lie in [0, 1], got {self.cr}")
        if not self.f > 0.0:
            raise ValidationError(f"f must be > 0, got {self.f}")
        if self.max_evals < self.pop_size:
            raise ValidationError(
                f"max_evals ({self.max_evals}) must be >= pop_size ({self.pop_size})"
            )
        if self.rho < 0:
            raise ValidationError(f"rho must be >= 0, got {self.rho}")
        if not 0.0 < self.p_best <= 1.0:
            raise ValidationError(f"p_best must lie in (0, 1], got {self.p_best}")
        if not 0.0 <= self.adapt_rate <= 1.0:
            raise ValidationError(f"adapt_rate must lie in [0, 1], got {self.adapt_rate}")
        if self.archive_size is not None and self.archive_size < 0:
            raise ValidationError(f"archive_size must be >= 0, got {self.archive_size}")
        if not 0.0 <= self.jump_rate <= 1.0:
            raise ValidationError(f"jump_rate must lie in [0, 1], got {self.jump_rate}")
        if self.stagnation < 0:
            raise ValidationError(f"stagnation must be >= 0, got {self.stagnation}")
        if not 0.0 <= self.cma_prob <= 1.0:
            raise ValidationError(f"cma_prob must lie in [0, 1], got {self.cma_prob}")
        if self.repair not in REPAIRS:
            raise ValidationError(f"unknown repair {self.repair!r}; valid: {', '.join(REPAIRS)}")
        return self

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


class Individual(NamedTuple):
    point: np.ndarray
    fitness: float
    evaluation: int


@dataclass
class RunTrace:
    """Best-so-far objective after every evaluation of one run."""

    best_so_far: np.ndarray
    best_point: np.ndarray
    best_digits: tuple[int, ...]
    best_permutation: tuple[int, ...]
    evaluations: int
    algorithm: str
    seed: int
    instance_id: int | None = None
    rng: str = RNG_NAME
    config: dict = field(default_factory=dict)

    @property
    def best_L(self) -> float:
        return float(self.best_so_far[-1])


def point_to_factoradic(z: Sequence[float], n: int) -> tuple[int, ...]:
    """Truncate a box point to factoradic digits: ``d_k = min(floor(z_k * (n-k+1)), n-k)``."""
    z = np.asarray(z, dtype=float)
    if z.shape != (n - 1,):
        raise ValidationError(f"expected a point of dimension {n - 1}, got shape {z.shape}")
    radices = np.arange(n, 1, -1)
    digits = np.minimum(np.floor(np.clip(z, 0.0, 1.0) * radices), radices - 1)
    return tuple(int(d) for d in digits)


def clamp(v: np.ndarray) -> np.ndarray:
    return np.clip(v, 0.0, 1.0)


def _distinct(rng: np.random.Generator, size: int, k: int, exclude: Sequence[int] = ()) -> list[int]:
    """``k`` distinct integers in ``[0, size)`` avoiding ``exclude``, by rejection."""
    if size - len(set(exclude)) < k:
        raise ValidationError(f"cannot draw {k} distinct indices from {size} excluding {exclude}")
    out: list[int] = []
    while len(out) < k:
        r = int(rng.integers(size))
        if r not in out and r not in exclude:
            out.append(r)
    return out


def rand1(pop: np.ndarray, target: int, f: float, rng: np.random.Generator) -> np.ndarray:
    """Unrepaired DE/rand/1 mutant."""
    r1, r2, r3 = _distinct(rng, len(pop), 3, (target,))
    return pop[r1] + f * (pop[r2] - pop[r3])


def best1(pop: np.ndarray, best: int, target: int, f: float, rng: np.random.Generator) -> np.ndarray:
    """Unrepaired DE/best/1 mutant."""
    r1, r2 = _distinct(rng, len(pop), 2, (target,))
    return pop[best] + f * (pop[r1] - pop[r2])


def mutate_derand(pop: np.ndarray, target: int, f: float, rng: np.random.Generator) -> np.ndarray:
    """DE/rand/1: ``x_r1 + F (x_r2 - x_r3)`` with donors distinct from each other and the target."""
    return clamp(rand1(pop, target, f, rng))


def mutate_debest(
    pop: np.ndarray, best: int, target: int, f: float, rng: np.random.Generator
) -> np.ndarray:
    """DE/best/1: ``x_best + F (x_r1 - x_r2)``."""
    return clamp(best1(pop, best, target, f, rng))


def repair(v: np.ndarray, target: np.ndarray, method: str, rng: np.random.Generator) -> np.ndarray:
    """Bring a mutant back into the unit box.

    ``clamp`` projects onto the box; ``midpoint`` puts a violating coordinate
    halfway between the target's value and the violated bound; ``random``
    redraws it uniformly.
    """
    low, high = v < 0.0, v > 1.0
    if not (low.any() or high.any()):
        return v
    if method == "clamp":
        return np.clip(v, 0.0, 1.0)
    if method == "midpoint":
        v = np.where(low, target / 2.0, v)
        return np.where(high, (target + 1.0) / 2.0, v)
    if method == "random":
        return np.where(low | high, rng.random(len(v)), v)
    raise ValidationError(f"unknown repair method {method!r}")


def crossover_binomial(
    target: np.ndarray, mutant: np.ndarray, cr: float, rng: np.random.Generator
) -> np.ndarray:
    """Take each coordinate from the mutant with probability ``cr``; one forced coordinate always."""
    dim = len(target)
    mask = rng.random(dim) < cr
    mask[rng.integers(dim)] = True
    return np.where(mask, mutant, target)


def _trial_survives(target_fitness: float, trial_fitness: float) -> bool:
    # ties go to the trial so the search keeps drifting across plateaus
    return trial_fitness <= target_fitness


def select_greedy(target: Individual, trial: Individual) -> Individual:
    return trial if _trial_survives(target.fitness, trial.fitness) else target


class Budget:
    """Counts objective calls and records the best-so-far trace."""

    def __init__(self, objective: Callable[[tuple[int, ...]], float], n: int, max_evals: int):
        self.objective = objective
        self.n = n
        self.max_evals = max_evals
        self.trace = np.empty(max_evals, dtype=float)
        self.count = 0
        self.best_fitness = math.inf
        self.best_point: np.ndarray | None = None
        self._radices = np.arange(n, 1, -1)

    @property
    def exhausted(self) -> bool:
        return self.count >= self.max_evals

    @property
    def remaining(self) -> int:
        return self.max_evals - self.count

    def digits(self, z: np.ndarray) -> tuple[int, ...]:
        radices = self._radices
        return tuple(np.minimum(np.floor(z * radices), radices - 1).astype(int).tolist())

    def __call__(self, z: np.ndarray) -> float:
        if self.count >= self.max_evals:
            raise RuntimeError("evaluation budget exhausted")
        value = self.objective(self.digits(z))
        if value < self.best_fitness:
            self.best_fitness = value
            self.best_point = z.copy()
        self.trace[self.count] = self.best_fitness
        self.count += 1
        return value


class DifferentialEvolution:
    """Generational DE loop; subclasses customise initialisation and mutation.

    Each generation builds every trial from the population as it stood at the
    start of the generation, evaluates the trials in order, then applies
    greedy survivor selection.
    """

    name = "base"

    def __init__(self, config: OptimizerConfig, budget: Budget, rng: np.random.Generator):
        self.config = config
        self.budget = budget
        self.rng = rng
        self.dim = budget.n - 1
        self.pop = np.empty((0, self.dim))
        self.fit = np.empty(0)

    # -- initialisation -------------------------------------------------
    def initialize(self) -> None:
        self.pop, self.fit = self._evaluate_all(self.rng.random((self.config.pop_size, self.dim)))

    def _evaluate_all(self, points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Evaluate as many rows as the budget allows; unevaluated rows are dropped."""
        k = min(len(points), self.budget.remaining)
        points = points[:k]
        return points, np.array([self.budget(z) for z in points], dtype=float)

    def _keep_best(self, points: np.ndarray, values: np.ndarray) -> None:
        order = np.argsort(values, kind="stable")[: self.config.pop_size]
        self.pop, self.fit = points[order], values[order]

    # -- one generation -------------------------------------------------
    def begin_generation(self) -> None:
        pass

    def mutant(self, i: int) -> np.ndarray:
        """Unrepaired mutant for target ``i``."""
        raise NotImplementedError

    def crossover_rate(self, i: int) -> float:
        return self.config.cr

    def on_selection(self, i: int, survived: bool, trial: np.ndarray) -> None:
        pass

    def end_generation(self) -> None:
        pass

    def generation(self) -> None:
        self.begin_generation()
        results = []
        for i in range(len(self.pop)):
            if self.budget.exhausted:
                break
            target = self.pop[i]
            mutant = repair(self.mutant(i), target, self.config.repair, self.rng)
            trial = crossover_binomial(target, mutant, self.crossover_rate(i), self.rng)
            results.append((i, trial, self.budget(trial)))
        pop, fit = self.pop.copy(), self.fit.copy()
        for i, trial, value in results:
            survived = _trial_survives(self.fit[i], value)
            self.on_selection(i, survived, trial)
            if survived:
                pop[i], fit[i] = trial, value
        self.pop, self.fit = pop, fit
        self.end_generation()

    def run(self) -> None:
        self.initialize()
        if len(self.pop) < 4 and not self.budget.exhausted:
            raise ValidationError("population too small for DE mutation")
        while not self.budget.exhausted:
            self.generation()

    def best_index(self) -> int:
        return int(np.argmin(self.fit))
