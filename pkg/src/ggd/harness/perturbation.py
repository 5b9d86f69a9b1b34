"""Random structural perturbations and how well GGD survives them."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..distance import GgdParams
from ..exceptions import InfeasibleError
from ..graph import Graph, induced_subgraph, is_connected
from .experiments import pair_distances, pearson, sample_pairs

KINDS = ("node_drop", "node_add", "edge_drop", "edge_add")
NODE_DROP_ATTEMPTS = 100


@dataclass(frozen=True)
class PerturbationSpec:
    kind: str
    amount: int
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.amount < 0:
            raise ValueError("amount must be non-negative")


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def _add_nodes(g: Graph, amount: int, rng) -> Graph:
    edges = [tuple(e) for e in g.edge_index]
    weights = list(g.weights)
    feats = None if g.features is None else list(g.features)
    n = g.node_count
    for _ in range(amount):
        anchor = int(rng.integers(n))
        edges.append((anchor, n))
        weights.append(1.0)
        if feats is not None:
            # new node inherits its anchor's features
            feats.append(feats[anchor])
        n += 1
    ei = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    return Graph(n, ei, weights, None if feats is None else np.asarray(feats), g.label)


def _drop_nodes(g: Graph, amount: int, rng) -> Graph:
    if amount >= g.node_count:
        raise InfeasibleError(f"cannot drop {amount} of {g.node_count} nodes")
    for _ in range(NODE_DROP_ATTEMPTS):
        drop = rng.choice(g.node_count, size=amount, replace=False)
        keep = np.setdiff1d(np.arange(g.node_count), drop)
        h = induced_subgraph(g, keep)
        if is_connected(h):
            return h
    raise InfeasibleError(
        f"no connected result after dropping {amount} nodes in {NODE_DROP_ATTEMPTS} attempts")


def _add_edges(g: Graph, amount: int, rng) -> Graph:
    n = g.node_count
    present = np.zeros((n, n), dtype=bool)
    present[g.edge_index[:, 0], g.edge_index[:, 1]] = True
    iu, ju = np.triu_indices(n, k=1)
    free = np.nonzero(~present[iu, ju])[0]
    if amount > len(free):
        raise InfeasibleError(f"only {len(free)} non-edges available, asked for {amount}")
    pick = rng.choice(free, size=amount, replace=False)
    ei = np.vstack([g.edge_index, np.column_stack([iu[pick], ju[pick]])])
    return Graph(n, ei, np.concatenate([g.weights, np.ones(amount)]), g.features, g.label)


def _drop_edges(g: Graph, amount: int, rng) -> Graph:
    cur = g
    for step in range(amount):
        safe = [e for e in range(cur.edge_count)
                if is_connected(Graph(cur.node_count, np.delete(cur.edge_index, e, axis=0),
                                      np.delete(cur.weights, e)))]
        if not safe:
            raise InfeasibleError(f"no non-bridge edge left after {step} removals")
        e = safe[int(rng.integers(len(safe)))]
        cur = Graph(cur.node_count, np.delete(cur.edge_index, e, axis=0),
                    np.delete(cur.weights, e), cur.features, cur.label)
    return cur


def perturb(g: Graph, spec: PerturbationSpec, rng: np.random.Generator | None = None) -> Graph:
    """Apply a seeded random perturbation.

    * ``node_add``: each new node gets one weight-1 edge to a uniformly
      chosen existing node.
    * ``node_drop``: removes uniformly chosen nodes, redrawing up to 100
      times until the remainder is connected.
    * ``edge_add``: inserts uniformly chosen non-edges with weight 1.
    * ``edge_drop``: removes uniformly chosen non-bridge edges, one at a time.

    ``rng`` overrides the generator seeded from ``spec.seed``.
    """
    if spec.amount == 0:
        return g
    rng = rng if rng is not None else _rng(spec.seed)
    return {"node_add": _add_nodes, "node_drop": _drop_nodes,
            "edge_add": _add_edges, "edge_drop": _drop_edges}[spec.kind](g, spec.amount, rng)


def perturbation_points(population: list[Graph], spec: PerturbationSpec,
                        params: GgdParams | None = None, workers: int | None = 1):
    """Pairs and their GGD before and after perturbing every graph.

    Graph ``i`` is perturbed with its own generator spawned from
    ``spec.seed``, so results do not depend on evaluation order.
    """
    params = params or GgdParams()
    seeds = np.random.SeedSequence(spec.seed).spawn(len(population))
    perturbed = [perturb(g, spec, _rng(s)) for g, s in zip(population, seeds)]
    pairs = sample_pairs(len(population), seed=spec.seed)
    before = pair_distances(population, pairs, params, workers)
    if spec.amount == 0:
        after = before.copy()
    else:
        after = pair_distances(perturbed, pairs, params, workers)
    return pairs, before, after


def perturbation_study(population: list[Graph], spec: PerturbationSpec,
                       params: GgdParams | None = None, workers: int | None = 1) -> float:
    """Pearson correlation of pairwise GGD before versus after perturbation."""
    if len(population) < 10:
        raise ValueError("a perturbation study needs at least 10 graphs")
    _, before, after = perturbation_points(population, spec, params, workers)
    return pearson(before, after)
