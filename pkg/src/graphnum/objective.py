"""Digit-count objective of a node relabeling and exhaustive landscapes.

The objective of a factoradic code ``x`` is ``log10(1 + g)`` where ``g`` is the
code of the graph after relabeling its nodes with the permutation that ``x``
decodes to. The ``1 +`` keeps the edgeless / rank-0 case finite without
changing which relabelings are minimal.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .combinatorics import (
    TABLE_LIMIT,
    _ROWS,
    binomial,
    factoradic_to_permutation,
    integer_to_factoradic,
)
from .exceptions import DomainError, ValidationError
from .graph import Graph, encode_graph, relabel

__all__ = [
    "MAX_LANDSCAPE_N",
    "log_rank",
    "evaluate",
    "LabelingObjective",
    "LandscapePoint",
    "exhaustive_landscape",
    "landscape_minimum",
    "landscape_csv",
]

MAX_LANDSCAPE_N = 9


def log_rank(g: int) -> float:
    """``log10(1 + g)`` for an exact non-negative integer ``g``.

    ``math.log10`` splits large ints into mantissa and exponent itself, so the
    result keeps double precision for ranks far beyond the float range.
    """
    if g < 0:
        raise DomainError(f"rank must be non-negative, got {g}")
    return math.log10(g + 1)


def evaluate(graph: Graph, digits: Sequence[int]) -> float:
    """Objective of ``graph`` relabeled by the factoradic code ``digits``.

    Reference path built from the public codec; :class:`LabelingObjective`
    computes the same value faster.
    """
    perm = factoradic_to_permutation(digits, graph.n)
    return log_rank(encode_graph(relabel(graph, perm)).g)


class LabelingObjective:
    """Fast, reentrant evaluator of relabeling ranks for one fixed graph.

    Calling the instance with a factoradic code returns the objective value;
    :meth:`rank` returns the exact integer instead.
    """

    def __init__(self, graph: Graph):
        self.graph = graph
        self.n = graph.n
        self._edges = tuple((u - 1, v - 1) for u, v in graph.edges)
        self._small = graph.n_pairs <= TABLE_LIMIT
        m = graph.m
        # sign of term c (1-based) in the alternating sum
        self._signs = tuple(1 if (m - c) % 2 == 0 else -1 for c in range(1, m + 1))
        # sum of the "-1" parts of every term
        self._offset = -sum(self._signs)

    def permutation(self, digits: Sequence[int]) -> list[int]:
        n = self.n
        if len(digits) != n - 1:
            raise ValidationError(f"expected {n - 1} digits, got {len(digits)}")
        if digits and min(digits) < 0:
            raise ValidationError(f"negative factoradic digit in {tuple(digits)}")
        pool = list(range(1, n + 1))
        try:
            perm = [pool.pop(d) for d in digits]
        except IndexError:
            raise ValidationError(f"factoradic digits out of range: {tuple(digits)}") from None
        perm.extend(pool)
        return perm

    def rank(self, digits: Sequence[int]) -> int:
        perm = self.permutation(digits)
        labels = []
        for u, v in self._edges:
            a = perm[u]
            b = perm[v]
            if a < b:
                a, b = b, a
            labels.append((a - 1) * (a - 2) // 2 + b)
        labels.sort()
        total = self._offset
        if self._small:
            rows = _ROWS
            for c, (i_c, s) in enumerate(zip(labels, self._signs), start=1):
                total += s * rows[i_c][c]
        else:
            for c, (i_c, s) in enumerate(zip(labels, self._signs), start=1):
                total += s * binomial(i_c, c)
        return total

    def __call__(self, digits: Sequence[int]) -> float:
        return math.log10(self.rank(digits) + 1)


@dataclass(frozen=True)
class LandscapePoint:
    x_index: int
    L: float


def exhaustive_landscape(graph: Graph) -> list[LandscapePoint]:
    """Objective value of every one of the ``n!`` relabelings, by factoradic index."""
    if graph.n > MAX_LANDSCAPE_N:
        raise DomainError(
            f"exhaustive landscape needs n <= {MAX_LANDSCAPE_N} "
            f"(n={graph.n} would mean {math.factorial(graph.n)} evaluations)"
        )
    objective = LabelingObjective(graph)
    return [
        LandscapePoint(x, objective(integer_to_factoradic(x, graph.n)))
        for x in range(math.factorial(graph.n))
    ]


def landscape_minimum(points: Iterable[LandscapePoint]) -> tuple[int, float]:
    """Smallest objective value and the lowest x_index attaining it."""
    best = None
    for p in points:
        if best is None or p.L < best.L or (p.L == best.L and p.x_index < best.x_index):
            best = p
    if best is None:
        raise DomainError("landscape is empty")
    return best.x_index, best.L


def landscape_csv(points: Iterable[LandscapePoint]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["x_index", "L"])
    for p in points:
        writer.writerow([p.x_index, repr(p.L)])
    return buf.getvalue()
