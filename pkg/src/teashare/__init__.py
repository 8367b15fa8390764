"""Exact simulation, bounds and search for sharing moves on finite graphs.

A sharing move replaces the weights on a connected vertex set by their
average. Everything here is exact rational arithmetic on ``fractions.Fraction``.
"""

__version__ = "0.1.0"

from .graph import Graph, GraphError, UnreachableError, build_graph, enumerate_connected_subsets, is_connected_subset
from .dynamics import (
    InvalidMoveError,
    QuasiMove,
    SharingMove,
    Weights,
    apply_adjoint_sequence,
    apply_edge_share,
    apply_quasi,
    apply_sequence,
    apply_share,
    inner_product,
    matrix_of_move,
    squared_norm,
)
from .bounds import (
    check_feasible,
    distance_bound,
    f_recursion,
    multi_target_bound,
    phi_bound,
    phi_bruteforce,
    rho,
    star_optimum,
)
from .search import SearchConfig, SearchResult, counterexample_audit, search_optimal, star_truncation_curve
from .limits import fixed_space_check, iterate_to_convergence, limit_distribution
