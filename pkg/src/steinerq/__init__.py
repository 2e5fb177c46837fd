"""Exact minimum Steiner tree solvers with a query-cost model for nested minimum finding."""

from .analysis import solve_beta, table2
from .dw import dw_solve
from .graph import Graph, SteinerTree, brute_force_steiner, build_graph
from .split import QueryLedger, SplitParams, hybrid_solve
from .stp import Instance, parse_stp, write_stp

__version__ = "0.1.0"

__all__ = [
    "Graph",
    "Instance",
    "QueryLedger",
    "SplitParams",
    "SteinerTree",
    "brute_force_steiner",
    "build_graph",
    "dw_solve",
    "hybrid_solve",
    "parse_stp",
    "solve_beta",
    "table2",
    "write_stp",
]
