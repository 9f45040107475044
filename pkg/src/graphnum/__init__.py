"""Minimal integer encodings of labeled undirected graphs.

A graph with ``n`` nodes and ``m`` edges is coded as the revolving-door rank of
its edge labels, and Differential Evolution searches node relabelings whose
code is as small as possible.
"""

from .combinatorics import (
    binomial,
    factoradic_to_integer,
    factoradic_to_permutation,
    integer_to_factoradic,
    permutation_to_factoradic,
    rank_revdoor,
    unrank_revdoor,
)
from .exceptions import DomainError, GraphNumError, GraphParseError, ValidationError
from .graph import (
    Graph,
    GraphCode,
    decode_graph,
    edge_from_index,
    edge_index,
    encode_graph,
    parse_graph,
    relabel,
    serialize_graph,
)
from .objective import LabelingObjective, evaluate, exhaustive_landscape, landscape_minimum
from .optimizers import ALGORITHMS, OptimizerConfig, RunTrace, point_to_factoradic, run

__version__ = "0.1.0"
