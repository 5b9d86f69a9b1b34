"""Shrinking a graph to an exact node count by contracting low-resistance edges."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import InfeasibleError
from .graph import Graph, build_adjacency, build_laplacian, is_connected
from .spectral import krylov_resistance, resistance_matrix

EXACT_LIMIT = 500
KRYLOV_DEFAULT_ORDER = 50


@dataclass(frozen=True)
class CoarseningStep:
    edge: tuple[int, int]  # endpoints in the graph *before* this contraction
    resistance: float
    node_count: int  # after this contraction


@dataclass(frozen=True)
class CoarseningTrace:
    steps: list[CoarseningStep] = field(default_factory=list)

    def __len__(self):
        return len(self.steps)

    def rows(self):
        return [(s.edge[0], s.edge[1], s.resistance, s.node_count) for s in self.steps]


def parse_resistance_mode(mode, n: int) -> tuple[str, int]:
    """Normalise a resistance mode to ``("exact", 0)`` or ``("krylov", m)``.

    Accepts ``"exact"``, ``"auto"``, ``"krylov"``, ``"krylov:M"`` or a
    ``("krylov", M)`` tuple.  ``auto`` picks exact up to 500 nodes.
    """
    if isinstance(mode, tuple):
        kind, m = mode
    else:
        kind, sep, m = str(mode).partition(":")
        try:
            m = int(m) if sep else None
        except ValueError:
            raise ValueError(f"bad Krylov order in {mode!r}") from None
        if sep and kind != "krylov":
            raise ValueError(f"unknown resistance mode {mode!r}")
    if kind == "auto":
        kind = "exact" if n <= EXACT_LIMIT else "krylov"
    if kind == "exact":
        return "exact", 0
    if kind == "krylov":
        if m is None:
            m = KRYLOV_DEFAULT_ORDER
        if m < 1:
            raise ValueError("Krylov order must be positive")
        return "krylov", min(m, n)
    raise ValueError(f"unknown resistance mode {mode!r}")


def _krylov_edge_resistances(g: Graph, m: int) -> np.ndarray:
    a = build_adjacency(g)
    lap = build_laplacian(a)
    return np.array([krylov_resistance(a, lap, int(p), int(q), m) for p, q in g.edge_index])


def edge_resistances(g: Graph, mode="auto") -> np.ndarray:
    """Effective resistance of every edge, aligned with ``g.edge_index``."""
    if not is_connected(g):
        raise InfeasibleError("effective resistance needs a connected graph")
    kind, m = parse_resistance_mode(mode, g.node_count)
    if kind == "krylov":
        return _krylov_edge_resistances(g, m)
    r = resistance_matrix(g)
    return r[g.edge_index[:, 0], g.edge_index[:, 1]]


def _feature_gaps(g: Graph, alpha: float) -> np.ndarray:
    if alpha == 0:
        return np.zeros(g.edge_count)
    if alpha < 0:
        raise ValueError(f"alpha must be non-negative, got {alpha}")
    if g.features is None:
        raise ValueError("alpha > 0 needs node features")
    f = g.features
    return np.linalg.norm(f[g.edge_index[:, 0]] - f[g.edge_index[:, 1]], axis=1)


def modified_edge_resistances(g: Graph, alpha: float = 0.0, mode="auto") -> np.ndarray:
    """``R_eff(p, q) + alpha * ||f_p - f_q||`` for every edge."""
    gaps = _feature_gaps(g, alpha)
    return edge_resistances(g, mode) + alpha * gaps


def modified_edge_resistance(g: Graph, p: int, q: int, alpha: float = 0.0,
                             mode="auto") -> float:
    """Resistance of edge ``(p, q)`` plus ``alpha`` times the feature distance."""
    e = g.edge_id(p, q)
    if e is None:
        raise ValueError(f"({p}, {q}) is not an edge")
    return float(modified_edge_resistances(g, alpha, mode)[e])


def contract_edge(g: Graph, p: int, q: int) -> Graph:
    """Merge the endpoints of edge ``(p, q)`` into one node.

    The merged node takes index ``min(p, q)``; nodes above ``max(p, q)``
    shift down by one.  Parallel edges sum their weights, the edge itself
    disappears, and the merged feature vector is the average of the two
    endpoints weighted by their weighted degrees.
    """
    if g.edge_id(p, q) is None:
        raise ValueError(f"({p}, {q}) is not an edge")
    keep, gone = min(p, q), max(p, q)
    remap = np.arange(g.node_count)
    remap[gone] = keep
    remap[gone + 1:] -= 1
    ei = remap[g.edge_index]
    loops = ei[:, 0] == ei[:, 1]
    ei, w = np.sort(ei[~loops], axis=1), g.weights[~loops]
    n_new = g.node_count - 1
    if len(ei):
        key = ei[:, 0] * n_new + ei[:, 1]
        uniq, inv = np.unique(key, return_inverse=True)
        w = np.bincount(inv, weights=w, minlength=len(uniq))
        ei = np.column_stack([uniq // n_new, uniq % n_new])
    feats = None
    if g.features is not None:
        deg = g.degrees()
        dp, dq = deg[p], deg[q]
        merged = (dp * g.features[p] + dq * g.features[q]) / (dp + dq)
        feats = np.delete(g.features, gone, axis=0)
        feats[keep] = merged
    return Graph(n_new, ei, w, feats, g.label)


def _pick_min(values: np.ndarray, edge_index: np.ndarray) -> int:
    # values within a relative 1e-12 of the minimum count as ties; the
    # lexicographically smallest (p, q) wins
    lo = values.min()
    tied = np.nonzero(values <= lo + 1e-12 * max(abs(lo), 1.0))[0]
    return int(tied[np.lexsort((edge_index[tied, 1], edge_index[tied, 0]))[0]])


def coarsen_to_size(g: Graph, target_n: int, alpha: float = 0.0, mode="auto",
                    batch: int | None = None) -> tuple[Graph, CoarseningTrace]:
    """Contract minimum-resistance edges until ``g`` has ``target_n`` nodes.

    Resistances are recomputed after every contraction.  With ``batch=k``,
    each round instead contracts up to ``k`` lowest-resistance edges that
    share no endpoint, ranked once per round.
    """
    if target_n < 1:
        raise InfeasibleError(f"target size must be at least 1, got {target_n}")
    if target_n >= g.node_count:
        raise InfeasibleError(
            f"target size {target_n} is not below the node count {g.node_count}")
    if not is_connected(g):
        raise InfeasibleError("coarsening needs a connected graph")
    if batch is not None and batch < 1:
        raise ValueError("batch must be positive")
    _feature_gaps(g, alpha)  # validates alpha/features before any work
    steps: list[CoarseningStep] = []
    cur = g
    while cur.node_count > target_n:
        scores = modified_edge_resistances(cur, alpha, mode)
        if batch is None or batch == 1:
            e = _pick_min(scores, cur.edge_index)
            p, q = map(int, cur.edge_index[e])
            cur = contract_edge(cur, p, q)
            steps.append(CoarseningStep((p, q), float(scores[e]), cur.node_count))
            continue
        order = np.lexsort((cur.edge_index[:, 1], cur.edge_index[:, 0], scores))
        budget = min(batch, cur.node_count - target_n)
        used: set[int] = set()
        chosen = []
        for e in order:
            p, q = map(int, cur.edge_index[e])
            if p in used or q in used:
                continue
            used.update((p, q))
            chosen.append((p, q, float(scores[e])))
            if len(chosen) == budget:
                break
        # label[x]: current index of node x from the start of this round
        label = np.arange(cur.node_count)
        for p, q, r in chosen:
            lp, lq = int(label[p]), int(label[q])
            cur = contract_edge(cur, lp, lq)
            steps.append(CoarseningStep((lp, lq), r, cur.node_count))
            gone = max(lp, lq)
            label[label > gone] -= 1
    return cur, CoarseningTrace(steps)
