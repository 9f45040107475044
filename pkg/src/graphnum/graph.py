"""Labeled undirected simple graphs and their integer codes.

Edges are stored canonically as ``(u, v)`` with ``u > v``. The integer label
of an edge is ``C(u - 1, 2) + v``, which enumerates the ``C(n, 2)`` possible
edges as ``1..C(n, 2)``. A graph's code is the revolving-door rank of its sorted
edge labels within the class of graphs with the same ``n`` and ``m``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .combinatorics import binomial, rank_revdoor, unrank_revdoor
from .exceptions import DomainError, GraphParseError, ValidationError

__all__ = [
    "Graph",
    "GraphCode",
    "edge_index",
    "edge_from_index",
    "encode_graph",
    "decode_graph",
    "relabel",
    "inverse_permutation",
    "parse_graph",
    "serialize_graph",
    "parse_code",
    "serialize_code",
    "class_size",
]


def edge_index(u: int, v: int, n: int) -> int:
    """Integer label of edge ``(u, v)`` with ``u > v``; lies in ``[1, C(n, 2)]``."""
    if not 1 <= v < u <= n:
        raise ValidationError(f"edge index needs 1 <= v < u <= n, got u={u}, v={v}, n={n}")
    return (u - 1) * (u - 2) // 2 + v


def edge_from_index(i: int, n: int) -> tuple[int, int]:
    """Inverse of :func:`edge_index`."""
    top = n * (n - 1) // 2
    if not 1 <= i <= top:
        raise DomainError(f"edge index {i} outside [1, {top}] for n={n}")
    # smallest u with C(u, 2) >= i
    u = (1 + math.isqrt(8 * i)) // 2
    while u * (u - 1) // 2 < i:
        u += 1
    while (u - 1) * (u - 2) // 2 >= i:
        u -= 1
    return u, i - (u - 1) * (u - 2) // 2


def class_size(n: int, m: int) -> int:
    """Number of graphs with ``n`` labeled nodes and ``m`` edges."""
    return binomial(binomial(n, 2), m)


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on nodes ``1..n``.

    ``edges`` may be given in any orientation and order; they are stored as
    ``(u, v)`` pairs with ``u > v``, sorted by edge label. Isolated nodes are
    allowed since ``n`` is explicit.
    """

    n: int
    edges: tuple[tuple[int, int], ...] = field(default=())

    def __post_init__(self):
        n = self.n
        if not isinstance(n, int) or n < 1:
            raise ValidationError(f"node count must be a positive integer, got {n!r}")
        canon = set()
        for pair in self.edges:
            a, b = pair
            if a == b:
                raise ValidationError(f"self-loop on node {a}")
            u, v = (a, b) if a > b else (b, a)
            if v < 1 or u > n:
                raise ValidationError(f"edge ({a}, {b}) has a label outside 1..{n}")
            if (u, v) in canon:
                raise ValidationError(f"duplicate edge ({u}, {v})")
            canon.add((u, v))
        object.__setattr__(self, "edges", tuple(sorted(canon)))

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def n_pairs(self) -> int:
        return self.n * (self.n - 1) // 2

    def edge_indices(self) -> tuple[int, ...]:
        # sorted (u, v) order coincides with ascending edge label
        return tuple((u - 1) * (u - 2) // 2 + v for u, v in self.edges)

    def is_connected(self) -> bool:
        parent = list(range(self.n + 1))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in self.edges:
            parent[find(u)] = find(v)
        return len({find(x) for x in range(1, self.n + 1)}) == 1


@dataclass(frozen=True)
class GraphCode:
    """The integer ``g`` identifying a graph inside the class of ``(n, m)`` graphs."""

    n: int
    m: int
    g: int

    def __post_init__(self):
        if self.n < 1 or self.m < 0:
            raise DomainError(f"invalid class (n={self.n}, m={self.m})")
        if self.m > self.n * (self.n - 1) // 2:
            raise DomainError(f"m={self.m} exceeds C({self.n}, 2)")
        size = class_size(self.n, self.m)
        if not 0 <= self.g < size:
            raise DomainError(f"g={self.g} outside [0, {size - 1}] for n={self.n}, m={self.m}")


def encode_graph(graph: Graph) -> GraphCode:
    return GraphCode(graph.n, graph.m, rank_revdoor(graph.edge_indices(), graph.n_pairs))


def decode_graph(code: GraphCode) -> Graph:
    indices = unrank_revdoor(code.g, code.n * (code.n - 1) // 2, code.m)
    return Graph(code.n, tuple(edge_from_index(i, code.n) for i in indices))


def relabel(graph: Graph, perm: Sequence[int]) -> Graph:
    """Map every node ``k`` to ``perm[k - 1]``."""
    if len(perm) != graph.n:
        raise ValidationError(f"permutation of length {len(perm)} for a graph with n={graph.n}")
    if sorted(perm) != list(range(1, graph.n + 1)):
        raise ValidationError(f"not a permutation of 1..{graph.n}")
    return Graph(graph.n, tuple((perm[u - 1], perm[v - 1]) for u, v in graph.edges))


def inverse_permutation(perm: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(perm)
    for k, p in enumerate(perm, start=1):
        inv[p - 1] = k
    return tuple(inv)


def _parse_ints(line: str, lineno: int, count: int) -> list[int]:
    parts = line.split()
    if len(parts) != count:
        raise GraphParseError(f"expected {count} integers, got {line!r}", lineno)
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise GraphParseError(f"non-integer token in {line!r}", lineno) from None


def parse_graph(text: str) -> Graph:
    """Parse the ``n m`` header plus ``m`` lines of ``u v`` pairs."""
    lines = text.splitlines()
    if not lines:
        raise GraphParseError("empty input", 1)
    n, m = _parse_ints(lines[0], 1, 2)
    if n < 1:
        raise GraphParseError(f"node count must be >= 1, got {n}", 1)
    if m < 0:
        raise GraphParseError(f"edge count must be >= 0, got {m}", 1)
    body = lines[1:]
    # tolerate trailing blank lines only
    while body and not body[-1].strip():
        body.pop()
    if len(body) != m:
        raise GraphParseError(f"header declares {m} edges but {len(body)} edge lines follow")
    seen = set()
    edges = []
    for lineno, line in enumerate(body, start=2):
        a, b = _parse_ints(line, lineno, 2)
        if a == b:
            raise GraphParseError(f"self-loop on node {a}", lineno)
        if not (1 <= a <= n and 1 <= b <= n):
            raise GraphParseError(f"label outside 1..{n} in {line!r}", lineno)
        key = (max(a, b), min(a, b))
        if key in seen:
            raise GraphParseError(f"duplicate edge {key}", lineno)
        seen.add(key)
        edges.append(key)
    return Graph(n, tuple(edges))


def serialize_graph(graph: Graph) -> str:
    lines = [f"{graph.n} {graph.m}"]
    lines.extend(f"{u} {v}" for u, v in graph.edges)
    return "\n".join(lines) + "\n"


def serialize_code(code: GraphCode) -> str:
    return f"{code.n} {code.m}\n{code.g}\n"


def parse_code(text: str) -> GraphCode:
    """Parse ``n m`` / ``g`` (two lines) or the single line ``n m g``."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise GraphParseError("empty input", 1)
    head = lines[0].split()
    if len(head) == 3:
        n, m, g = _parse_ints(lines[0], 1, 3)
    elif len(head) == 2 and len(lines) >= 2:
        n, m = _parse_ints(lines[0], 1, 2)
        (g,) = _parse_ints(lines[1], 2, 1)
    else:
        raise GraphParseError(f"expected 'n m' then 'g', got {lines[0]!r}", 1)
    return GraphCode(n, m, g)


def graph_from_indices(n: int, indices: Iterable[int]) -> Graph:
    return Graph(n, tuple(edge_from_index(i, n) for i in indices))
