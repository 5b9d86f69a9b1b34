"""Pairwise distance matrices, kernels, cut-mismatch enumeration and timing."""
from __future__ import annotations

import itertools
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from threadpoolctl import threadpool_limits

from ..distance import GgdParams, compute_ggd
from ..exceptions import GGDError, InfeasibleError
from ..graph import Graph, build_adjacency, build_laplacian, is_connected

ALL_PAIRS_LIMIT = 200
SAMPLED_PAIRS = 10_000
MAX_CUT_NODES = 20


class PairError(GGDError):
    """A distance computation failed for one pair of graphs."""

    def __init__(self, i: int, j: int, cause: Exception):
        super().__init__(f"pair ({i}, {j}): {type(cause).__name__}: {cause}")
        self.i, self.j, self.cause = i, j, cause


@dataclass(frozen=True)
class DistanceMatrix:
    values: np.ndarray
    params: GgdParams


def random_connected_graph(n: int, rng: np.random.Generator, p: float | None = None,
                           weights: tuple[float, float] | None = None,
                           max_tries: int = 1000) -> Graph:
    """Connected Erdos-Renyi graph, resampled until connected.

    ``p`` defaults to ``2 ln(n) / n`` (capped at 1).  ``weights=(lo, hi)``
    draws uniform edge weights; otherwise edges have weight 1.
    """
    if n == 1:
        return Graph.from_edges(1, [])
    if p is None:
        p = min(1.0, 2.0 * math.log(n) / n)
    iu, ju = np.triu_indices(n, k=1)
    for _ in range(max_tries):
        mask = rng.random(len(iu)) < p
        w = np.ones(mask.sum()) if weights is None else rng.uniform(*weights, mask.sum())
        g = Graph(n, np.column_stack([iu[mask], ju[mask]]), w)
        if is_connected(g):
            return g
    raise InfeasibleError(f"no connected G({n}, {p}) sample in {max_tries} tries")


def sample_pairs(n_items: int, seed: int = 0, limit: int = ALL_PAIRS_LIMIT,
                 n_samples: int = SAMPLED_PAIRS) -> list[tuple[int, int]]:
    """All ``i < j`` pairs for small collections, else a seeded uniform sample."""
    pairs = list(itertools.combinations(range(n_items), 2))
    if n_items <= limit or len(pairs) <= n_samples:
        return pairs
    rng = np.random.default_rng(seed)
    pick = np.sort(rng.choice(len(pairs), size=n_samples, replace=False))
    return [pairs[k] for k in pick]


def _pair_chunk(graphs, params, pairs):
    out = []
    with threadpool_limits(limits=1):
        for i, j in pairs:
            try:
                out.append(compute_ggd(graphs[i], graphs[j], params).distance)
            except GGDError as exc:
                raise PairError(i, j, exc) from exc
            except (ValueError, ArithmeticError) as exc:
                raise PairError(i, j, exc) from exc
    return out


def resolve_workers(workers: int | None) -> int:
    if workers is None:
        env = os.environ.get("GGD_THREADS")
        workers = int(env) if env else (os.cpu_count() or 1)
    if workers < 1:
        raise ValueError("workers must be positive")
    return workers


def pair_distances(graphs: list[Graph], pairs: list[tuple[int, int]],
                   params: GgdParams | None = None, workers: int | None = 1) -> np.ndarray:
    """GGD for each listed pair; identical results for any worker count.

    Each pair is computed with single-threaded BLAS, so the floating point
    result does not depend on how the pairs are distributed.
    """
    params = params or GgdParams()
    workers = resolve_workers(workers)
    if workers == 1 or len(pairs) < 2:
        return np.asarray(_pair_chunk(graphs, params, pairs), dtype=np.float64)
    n_chunks = min(len(pairs), 4 * workers)
    bounds = np.linspace(0, len(pairs), n_chunks + 1).astype(int)
    chunks = [pairs[a:b] for a, b in zip(bounds[:-1], bounds[1:])]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_pair_chunk, [graphs] * len(chunks), [params] * len(chunks),
                              chunks))
    return np.asarray([d for part in parts for d in part], dtype=np.float64)


def distance_matrix(graphs: list[Graph], params: GgdParams | None = None,
                    workers: int | None = 1) -> DistanceMatrix:
    """Symmetric matrix of pairwise GGD values with a zero diagonal."""
    params = params or GgdParams()
    n = len(graphs)
    pairs = list(itertools.combinations(range(n), 2))
    d = np.zeros((n, n))
    if pairs:
        vals = pair_distances(graphs, pairs, params, workers)
        iu = np.asarray(pairs)
        d[iu[:, 0], iu[:, 1]] = vals
        d[iu[:, 1], iu[:, 0]] = vals
    return DistanceMatrix(d, params)


def cross_distances(rows: list[Graph], cols: list[Graph], params: GgdParams | None = None,
                    workers: int | None = 1) -> np.ndarray:
    """``len(rows) x len(cols)`` matrix of GGD values."""
    params = params or GgdParams()
    both = list(rows) + list(cols)
    pairs = [(i, len(rows) + j) for i in range(len(rows)) for j in range(len(cols))]
    vals = pair_distances(both, pairs, params, workers) if pairs else np.zeros(0)
    return vals.reshape(len(rows), len(cols))


def kernel_from_distances(d, gamma: float) -> np.ndarray:
    """Elementwise ``exp(-gamma * d)``."""
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    d = d.values if isinstance(d, DistanceMatrix) else np.asarray(d, dtype=np.float64)
    return np.exp(-gamma * d)


def pearson(x, y) -> float:
    """Sample Pearson correlation coefficient."""
    x = np.asarray(x, dtype=np.float64).ravel()
    y = np.asarray(y, dtype=np.float64).ravel()
    if len(x) != len(y):
        raise ValueError("x and y must have equal length")
    if len(x) < 2:
        raise ValueError("need at least two points")
    dx, dy = x - x.mean(), y - y.mean()
    sx, sy = np.sqrt(dx @ dx), np.sqrt(dy @ dy)
    if sx == 0 or sy == 0:
        raise ValueError("correlation undefined for zero variance")
    return float(np.clip((dx @ dy) / (sx * sy), -1.0, 1.0))


@dataclass(frozen=True)
class CutMismatch:
    ratio: float
    subset: tuple[int, ...]
    infinite: int  # subsets cut in G1 but not in G2, excluded from the max


def brute_force_cut_mismatch(g1: Graph, g2: Graph, chunk: int = 1 << 14) -> CutMismatch:
    """Largest ``cut_G1(S) / cut_G2(S)`` over every nonempty proper subset ``S``.

    Subsets where either cut is zero are skipped; those with only the second
    cut zero are counted in ``infinite``.  Exponential in ``n``.
    """
    n = g1.node_count
    if g2.node_count != n:
        raise ValueError("graphs must share the node set")
    if n > MAX_CUT_NODES:
        raise ValueError(f"exhaustive enumeration limited to {MAX_CUT_NODES} nodes, got {n}")
    if n < 2:
        raise ValueError("need at least two nodes")
    l1 = build_laplacian(build_adjacency(g1))
    l2 = build_laplacian(build_adjacency(g2))
    bits = 1 << np.arange(n)
    tol1 = 1e-12 * max(1.0, np.abs(l1).max())
    tol2 = 1e-12 * max(1.0, np.abs(l2).max())
    best, best_s, infinite = -np.inf, 0, 0
    # node n-1 fixed outside S: S and its complement have the same cut
    total = 1 << (n - 1)
    for start in range(1, total, chunk):
        codes = np.arange(start, min(start + chunk, total))
        x = ((codes[:, None] & bits[None, :]) > 0).astype(np.float64)
        c1 = np.sum((x @ l1) * x, axis=1)
        c2 = np.sum((x @ l2) * x, axis=1)
        pos1, pos2 = c1 > tol1, c2 > tol2
        infinite += int(np.sum(pos1 & ~pos2))
        ok = pos1 & pos2
        if ok.any():
            r = np.where(ok, c1 / np.where(pos2, c2, 1.0), -np.inf)
            k = int(np.argmax(r))
            if r[k] > best:
                best, best_s = float(r[k]), int(codes[k])
    subset = tuple(i for i in range(n) if best_s >> i & 1)
    return CutMismatch(best if np.isfinite(best) else float("nan"), subset, infinite)


def benchmark_pairs(pairs: list[tuple[Graph, Graph]], params: GgdParams | None = None,
                    repetitions: int = 5) -> dict:
    """Wall-clock time per distance computation, averaged over repetitions.

    Returns the per-repetition mean time per pair plus their mean and standard
    deviation, in seconds.
    """
    params = params or GgdParams()
    if not pairs:
        raise ValueError("no pairs to time")
    per_pair = []
    for _ in range(repetitions):
        t0 = time.perf_counter()
        for a, b in pairs:
            compute_ggd(a, b, params)
        per_pair.append((time.perf_counter() - t0) / len(pairs))
    arr = np.asarray(per_pair)
    return {"pairs": len(pairs), "repetitions": repetitions,
            "per_pair_seconds": per_pair, "mean": float(arr.mean()),
            "std": float(arr.std(ddof=1)) if repetitions > 1 else 0.0,
            "total_mean": float(arr.mean() * len(pairs))}
