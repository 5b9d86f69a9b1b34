"""Turning feature tables into sparse graphs, and distances between datasets."""
from __future__ import annotations

import numpy as np
from scipy.spatial import cKDTree

from ..distance import GgdParams, compute_ggd
from ..exceptions import InfeasibleError
from ..graph import Graph, is_connected
from ..spectral import resistance_matrix


def knn_graph(features: np.ndarray, k: int) -> Graph:
    """Union k-nearest-neighbour graph with weights ``1 / ||x_p - x_q||^2``.

    An edge joins ``p`` and ``q`` when either is among the other's ``k``
    nearest neighbours.
    """
    x = np.asarray(features, dtype=np.float64)
    if x.ndim != 2:
        raise ValueError("features must be an (n, d) matrix")
    n = x.shape[0]
    if k < 1 or n < k + 1:
        raise ValueError(f"need 1 <= k < n, got k={k}, n={n}")
    dist, idx = cKDTree(x).query(x, k=k + 1)
    rows = np.repeat(np.arange(n), k + 1)
    cols = idx.ravel()
    d = dist.ravel()
    off = rows != cols
    rows, cols, d = rows[off], cols[off], d[off]
    if np.any(d == 0):
        raise ValueError("duplicate points give a zero distance")
    lo, hi = np.minimum(rows, cols), np.maximum(rows, cols)
    key, first = np.unique(lo * n + hi, return_index=True)
    sq = d[first] ** 2
    return Graph(n, np.column_stack([key // n, key % n]), 1.0 / sq, x)


def dataset_to_graph(features: np.ndarray, k: int = 10, prune_fraction: float = 0.0) -> Graph:
    """k-NN graph sparsified by pruning edges with the smallest ``w * R_eff``.

    ``round(prune_fraction * m)`` edges are removed in increasing order of
    their distance ratio (computed once on the full k-NN graph); a removal
    that would disconnect the graph is skipped.
    """
    if not 0 <= prune_fraction < 1:
        raise ValueError("prune_fraction must lie in [0, 1)")
    g = knn_graph(features, k)
    if not is_connected(g):
        raise InfeasibleError("k-NN graph is disconnected; increase k")
    n_prune = int(round(prune_fraction * g.edge_count))
    if n_prune == 0:
        return g
    rho = distance_ratios(g)
    order = np.lexsort((g.edge_index[:, 1], g.edge_index[:, 0], rho))
    alive = np.ones(g.edge_count, dtype=bool)
    removed = 0
    for e in order:
        if removed == n_prune:
            break
        alive[e] = False
        if is_connected(Graph(g.node_count, g.edge_index[alive], g.weights[alive])):
            removed += 1
        else:
            alive[e] = True
    return Graph(g.node_count, g.edge_index[alive], g.weights[alive], g.features, g.label)


def distance_ratios(g: Graph) -> np.ndarray:
    """``w_pq * R_eff(p, q)`` for every edge."""
    r = resistance_matrix(g)
    return g.weights * r[g.edge_index[:, 0], g.edge_index[:, 1]]


def dataset_distance(fa: np.ndarray, fb: np.ndarray, k: int = 10, prune_fraction: float = 0.0,
                     params: GgdParams | None = None) -> float:
    """GGD between the graphs built from two feature tables."""
    ga = dataset_to_graph(fa, k, prune_fraction)
    gb = dataset_to_graph(fb, k, prune_fraction)
    return compute_ggd(ga, gb, params).distance
