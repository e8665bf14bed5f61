"""Approximation algorithms for the Restricted Maximum Acyclic Subgraph problem."""

from rmas.combined import SolveReport, guarantee_bound, solve, solve_combined
from rmas.errors import (
    CapExceededError,
    InfeasibleLabelingError,
    LpError,
    ParseError,
    RmasError,
)
from rmas.exact import brute_force_opt, max_dicut
from rmas.instance import (
    Edge,
    FilterReport,
    RmasInstance,
    evaluate,
    filter_edges,
    parse_instance,
    serialize_instance,
    total_weight,
)

__all__ = [
    "CapExceededError",
    "Edge",
    "FilterReport",
    "InfeasibleLabelingError",
    "LpError",
    "ParseError",
    "RmasError",
    "RmasInstance",
    "SolveReport",
    "brute_force_opt",
    "evaluate",
    "filter_edges",
    "guarantee_bound",
    "max_dicut",
    "parse_instance",
    "serialize_instance",
    "solve",
    "solve_combined",
    "total_weight",
]
