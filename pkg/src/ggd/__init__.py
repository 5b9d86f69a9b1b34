"""Graph geodesic distance (GGD) between weighted undirected graphs.

The larger of two graphs is first shrunk to the common size by
effective-resistance coarsening.  Spectral matching (GRAMPA) then aligns the
nodes, and the distance is the affine-invariant geodesic distance between the
modified Laplacians ``L + eps*I``.
"""
from .coarsening import CoarseningTrace, coarsen_to_size, contract_edge, modified_edge_resistance
from .distance import (GgdParams, GgdResult, compute_ggd, ggd, ggd_airm, ggd_approx, ggd_lerm,
                       ggd_normalized_variant)
from .exceptions import GGDError, GraphFormatError, InfeasibleError, NumericalError
from .graph import (Graph, apply_permutation, build_adjacency, build_laplacian, giant_component,
                    is_connected, modified_laplacian, modify_laplacian, permute_graph)
from .io import load_graph_json, load_tudataset, save_graph_json
from .matching import match_graphs, similarity_matrix
from .spectral import effective_resistance_exact, effective_resistance_krylov, generalized_eig_spd

__version__ = "0.1.0"

__all__ = [
    "CoarseningTrace", "GGDError", "GgdParams", "GgdResult", "Graph", "GraphFormatError",
    "InfeasibleError", "NumericalError", "apply_permutation", "build_adjacency",
    "build_laplacian", "coarsen_to_size", "compute_ggd", "contract_edge",
    "effective_resistance_exact", "effective_resistance_krylov", "generalized_eig_spd", "ggd",
    "ggd_airm", "ggd_approx", "ggd_lerm", "ggd_normalized_variant", "giant_component",
    "is_connected", "load_graph_json", "load_tudataset", "match_graphs",
    "modified_edge_resistance", "modified_laplacian", "modify_laplacian", "permute_graph",
    "save_graph_json", "similarity_matrix",
]
