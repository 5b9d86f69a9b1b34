"""Weighted undirected graphs and their matrix representations.

A :class:`Graph` is an immutable edge list with optional per-node features
and an optional class label.  Matrices are plain dense ``numpy`` arrays; the
graphs this package targets have at most a few thousand nodes.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .exceptions import GraphFormatError, InfeasibleError

DEFAULT_EPSILON = 1e-4


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Graph:
    """Weighted undirected simple graph.

    Edges are stored canonically: ``u < v`` and sorted lexicographically, so
    two graphs built from the same edge set in any order compare equal.

    Attributes:
        node_count: number of nodes, indexed ``0 .. node_count - 1``.
        edge_index: ``(m, 2)`` int array of endpoints with ``u < v``.
        weights: ``(m,)`` array of strictly positive edge weights.
        features: optional ``(node_count, s)`` array of node features.
        label: optional integer class label of the whole graph.
    """

    node_count: int
    edge_index: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    features: np.ndarray | None = field(default=None, repr=False)
    label: int | None = None

    def __post_init__(self):
        n = int(self.node_count)
        if n < 0:
            raise GraphFormatError(f"node_count must be non-negative, got {n}")
        ei = np.asarray(self.edge_index, dtype=np.int64).reshape(-1, 2)
        w = np.asarray(self.weights, dtype=np.float64).reshape(-1)
        if len(ei) != len(w):
            raise GraphFormatError("edge_index and weights differ in length")
        if len(ei):
            if ei.min() < 0 or ei.max() >= n:
                raise GraphFormatError("edge endpoint out of range")
            if np.any(ei[:, 0] == ei[:, 1]):
                raise GraphFormatError("self-loops are not allowed")
            if not np.all(np.isfinite(w)) or np.any(w <= 0):
                raise GraphFormatError("edge weights must be finite and strictly positive")
        ei = np.sort(ei, axis=1)
        order = np.lexsort((ei[:, 1], ei[:, 0]))
        ei, w = ei[order], w[order]
        if len(ei) > 1 and np.any(np.all(ei[1:] == ei[:-1], axis=1)):
            raise GraphFormatError("duplicate edge between the same pair of nodes")
        feats = self.features
        if feats is not None:
            feats = np.asarray(feats, dtype=np.float64)
            if feats.ndim == 1:
                feats = feats.reshape(n, -1) if n else feats.reshape(0, 0)
            if feats.ndim != 2 or feats.shape[0] != n:
                raise GraphFormatError(
                    f"features must have shape ({n}, s), got {feats.shape}")
            if not np.all(np.isfinite(feats)):
                raise GraphFormatError("features must be finite")
            feats = _frozen(feats)
        label = None if self.label is None else int(self.label)
        object.__setattr__(self, "node_count", n)
        object.__setattr__(self, "edge_index", _frozen(ei))
        object.__setattr__(self, "weights", _frozen(w))
        object.__setattr__(self, "features", feats)
        object.__setattr__(self, "label", label)

    @classmethod
    def from_edges(cls, node_count: int, edges: Iterable[Sequence], features=None,
                   label: int | None = None) -> "Graph":
        """Build a graph from ``(u, v)`` or ``(u, v, w)`` tuples (default weight 1)."""
        us, vs, ws = [], [], []
        for e in edges:
            if len(e) == 2:
                u, v = e
                w = 1.0
            elif len(e) == 3:
                u, v, w = e
            else:
                raise GraphFormatError(f"edge must have 2 or 3 entries, got {e!r}")
            us.append(int(u))
            vs.append(int(v))
            ws.append(float(w))
        ei = np.column_stack([us, vs]) if us else np.zeros((0, 2), dtype=np.int64)
        return cls(node_count, ei, np.asarray(ws, dtype=np.float64), features, label)

    @classmethod
    def from_adjacency(cls, a: np.ndarray, features=None, label: int | None = None) -> "Graph":
        """Build a graph from a symmetric adjacency matrix (diagonal ignored)."""
        a = np.asarray(a, dtype=np.float64)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise GraphFormatError("adjacency matrix must be square")
        if not np.allclose(a, a.T, rtol=0, atol=1e-12 * max(1.0, np.abs(a).max(initial=0))):
            raise GraphFormatError("adjacency matrix must be symmetric")
        iu, ju = np.nonzero(np.triu(a, k=1))
        return cls(a.shape[0], np.column_stack([iu, ju]), a[iu, ju], features, label)

    @property
    def edge_count(self) -> int:
        return len(self.weights)

    @property
    def edges(self) -> list[tuple[int, int, float]]:
        return [(int(u), int(v), float(w)) for (u, v), w in zip(self.edge_index, self.weights)]

    @property
    def feature_dim(self) -> int:
        return 0 if self.features is None else self.features.shape[1]

    def degrees(self) -> np.ndarray:
        """Weighted degree of every node."""
        d = np.zeros(self.node_count)
        np.add.at(d, self.edge_index[:, 0], self.weights)
        np.add.at(d, self.edge_index[:, 1], self.weights)
        return d

    def has_edge(self, p: int, q: int) -> bool:
        return self.edge_id(p, q) is not None

    def edge_id(self, p: int, q: int) -> int | None:
        """Row of ``(p, q)`` in :attr:`edge_index`, or ``None`` if absent."""
        u, v = (p, q) if p < q else (q, p)
        hits = np.nonzero((self.edge_index[:, 0] == u) & (self.edge_index[:, 1] == v))[0]
        return int(hits[0]) if len(hits) else None

    def neighbors(self) -> list[list[int]]:
        nbrs: list[list[int]] = [[] for _ in range(self.node_count)]
        for u, v in self.edge_index:
            nbrs[u].append(int(v))
            nbrs[v].append(int(u))
        return nbrs

    def with_label(self, label: int | None) -> "Graph":
        return Graph(self.node_count, self.edge_index, self.weights, self.features, label)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        if (self.node_count, self.label) != (other.node_count, other.label):
            return False
        if not (np.array_equal(self.edge_index, other.edge_index)
                and np.array_equal(self.weights, other.weights)):
            return False
        if (self.features is None) != (other.features is None):
            return False
        return self.features is None or np.array_equal(self.features, other.features)

    def __hash__(self):
        return hash((self.node_count, self.edge_count, self.label,
                     self.edge_index.tobytes(), self.weights.tobytes()))

    def __repr__(self):
        extra = f", features={self.feature_dim}d" if self.features is not None else ""
        lab = f", label={self.label}" if self.label is not None else ""
        return f"Graph(n={self.node_count}, m={self.edge_count}{extra}{lab})"


def build_adjacency(g: Graph) -> np.ndarray:
    """Dense symmetric weighted adjacency matrix with zero diagonal."""
    a = np.zeros((g.node_count, g.node_count))
    u, v = g.edge_index[:, 0], g.edge_index[:, 1]
    a[u, v] = g.weights
    a[v, u] = g.weights
    return a


def build_laplacian(a: np.ndarray) -> np.ndarray:
    """Combinatorial Laplacian ``D - A`` of a symmetric adjacency matrix."""
    a = np.asarray(a, dtype=np.float64)
    lap = -a.copy()
    np.fill_diagonal(lap, 0.0)
    # D - A with the diagonal of A discarded, so every row sums to zero
    lap[np.diag_indices_from(lap)] = -lap.sum(axis=1)
    return lap


def modify_laplacian(lap: np.ndarray, epsilon: float = DEFAULT_EPSILON) -> np.ndarray:
    """Shift a Laplacian by ``epsilon * I`` so that it becomes positive definite."""
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    out = np.array(lap, dtype=np.float64, copy=True)
    out[np.diag_indices_from(out)] += epsilon
    return out


def modified_laplacian(g: Graph, epsilon: float = DEFAULT_EPSILON) -> np.ndarray:
    return modify_laplacian(build_laplacian(build_adjacency(g)), epsilon)


def check_permutation(p, n: int | None = None) -> np.ndarray:
    """Validate that ``p`` is a bijection on ``0 .. len(p) - 1`` and return it as an array."""
    p = np.asarray(p)
    if p.ndim != 1 or not np.issubdtype(p.dtype, np.integer):
        raise ValueError("a permutation must be a 1-d integer array")
    if n is not None and len(p) != n:
        raise ValueError(f"permutation has length {len(p)}, expected {n}")
    if not np.array_equal(np.sort(p), np.arange(len(p))):
        raise ValueError("mapping is not a bijection")
    return p.astype(np.int64)


def apply_permutation(a: np.ndarray, p) -> np.ndarray:
    """Relabel a square matrix so that index ``i`` moves to ``p[i]``.

    This is ``P A P^T`` for the permutation matrix with ``P[p[i], i] = 1``,
    computed by fancy indexing.
    """
    a = np.asarray(a)
    p = check_permutation(p, a.shape[0])
    out = np.empty_like(a)
    out[np.ix_(p, p)] = a
    return out


def permute_graph(g: Graph, p) -> Graph:
    """Relabel the nodes of ``g``: node ``i`` becomes node ``p[i]``."""
    p = check_permutation(p, g.node_count)
    feats = None
    if g.features is not None:
        feats = np.empty_like(g.features)
        feats[p] = g.features
    return Graph(g.node_count, p[g.edge_index], g.weights, feats, g.label)


def connected_components(g: Graph) -> list[list[int]]:
    """Connected components as sorted node lists, ordered by smallest member."""
    nbrs = g.neighbors()
    seen = np.zeros(g.node_count, dtype=bool)
    comps = []
    for s in range(g.node_count):
        if seen[s]:
            continue
        seen[s] = True
        comp, queue = [s], deque([s])
        while queue:
            u = queue.popleft()
            for v in nbrs[u]:
                if not seen[v]:
                    seen[v] = True
                    comp.append(v)
                    queue.append(v)
        comps.append(sorted(comp))
    return comps


def is_connected(g: Graph) -> bool:
    """True iff the graph has exactly one connected component."""
    return g.node_count > 0 and len(connected_components(g)) == 1


def induced_subgraph(g: Graph, nodes: Sequence[int]) -> Graph:
    """Subgraph on ``nodes`` (sorted), reindexed densely in increasing order."""
    nodes = np.unique(np.asarray(nodes, dtype=np.int64))
    remap = np.full(g.node_count, -1, dtype=np.int64)
    remap[nodes] = np.arange(len(nodes))
    keep = (remap[g.edge_index[:, 0]] >= 0) & (remap[g.edge_index[:, 1]] >= 0)
    feats = None if g.features is None else g.features[nodes]
    return Graph(len(nodes), remap[g.edge_index[keep]], g.weights[keep], feats, g.label)


def giant_component(g: Graph) -> Graph:
    """Largest connected component; ties go to the component holding the smallest node."""
    if g.node_count == 0:
        raise InfeasibleError("empty graph has no components")
    comps = connected_components(g)
    # components come ordered by smallest member, and max() keeps the first maximum
    best = max(comps, key=len)
    if len(best) == g.node_count:
        return g
    return induced_subgraph(g, best)
