"""Differential Evolution search over node relabelings."""

from __future__ import annotations

import numpy as np

from ..exceptions import ValidationError
from ..graph import Graph
from ..objective import LabelingObjective
from .base import (
    ALGORITHMS,
    RNG_NAME,
    Budget,
    DifferentialEvolution,
    Individual,
    OptimizerConfig,
    RunTrace,
    clamp,
    crossover_binomial,
    mutate_debest,
    mutate_derand,
    point_to_factoradic,
    select_greedy,
)
from .variants import VARIANTS

__all__ = [
    "ALGORITHMS",
    "RNG_NAME",
    "Budget",
    "DifferentialEvolution",
    "Individual",
    "OptimizerConfig",
    "RunTrace",
    "VARIANTS",
    "clamp",
    "crossover_binomial",
    "mutate_debest",
    "mutate_derand",
    "point_to_factoradic",
    "select_greedy",
    "run",
]


def run(config: OptimizerConfig, graph: Graph, instance_id: int | None = None) -> RunTrace:
    """Minimise the relabeling objective of ``graph`` with one DE variant.

    Deterministic in ``(config, graph)``; consumes exactly ``config.max_evals``
    evaluations.
    """
    config.validate()
    if graph.n < 2:
        raise ValidationError("relabeling search needs at least 2 nodes")
    objective = LabelingObjective(graph)
    budget = Budget(objective, graph.n, config.max_evals)
    rng = np.random.default_rng(config.seed)
    VARIANTS[config.algorithm](config, budget, rng).run()

    digits = budget.digits(budget.best_point)
    return RunTrace(
        best_so_far=budget.trace,
        best_point=budget.best_point,
        best_digits=digits,
        best_permutation=tuple(objective.permutation(digits)),
        evaluations=budget.count,
        algorithm=config.algorithm,
        seed=config.seed,
        instance_id=instance_id,
        config=config.as_dict(),
    )
