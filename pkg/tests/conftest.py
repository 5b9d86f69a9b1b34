"""Shared graph builders and the acceptance summary printed at the end of a run."""
from __future__ import annotations

import networkx as nx
import numpy as np
import pytest

from ggd import Graph
from ggd.harness import random_connected_graph

ACCEPTANCE_LINES: list[str] = []


def record(criterion: str, ok: bool | None, detail: str) -> None:
    """Store and print one pass/fail line for an acceptance criterion (``None`` means skipped)."""
    status = "SKIP" if ok is None else "PASS" if ok else "FAIL"
    line = f"[acceptance {criterion}] {status}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def ring(n: int, w: float = 1.0) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n, w) for i in range(n)])


def path(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def triangle(w=(1.0, 1.0, 1.0)) -> Graph:
    return Graph.from_edges(3, [(0, 1, w[0]), (1, 2, w[1]), (0, 2, w[2])])


def k2(w: float = 1.0) -> Graph:
    return Graph.from_edges(2, [(0, 1, w)])


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.node_count))
    h.add_weighted_edges_from((int(u), int(v), float(w)) for (u, v), w in zip(g.edge_index, g.weights))
    return h


def has_trivial_automorphisms(g: Graph) -> bool:
    """True when the identity is the only automorphism (counting stops at two)."""
    h = to_nx(g)
    matcher = nx.algorithms.isomorphism.GraphMatcher(h, h)
    for count, _ in enumerate(matcher.isomorphisms_iter(), start=1):
        if count > 1:
            return False
    return True


def asymmetric_graph(n: int, rng: np.random.Generator, p: float | None = None) -> Graph:
    """Connected random graph whose automorphism group is trivial."""
    while True:
        g = random_connected_graph(n, rng, p)
        if has_trivial_automorphisms(g):
            return g


def weighted_random_graph(n: int, rng: np.random.Generator) -> Graph:
    return random_connected_graph(n, rng, weights=(0.5, 2.0))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
