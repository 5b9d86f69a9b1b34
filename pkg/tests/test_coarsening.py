import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import k2, path, ring, triangle
from ggd import Graph, InfeasibleError, coarsen_to_size, contract_edge, modified_edge_resistance
from ggd.coarsening import edge_resistances, parse_resistance_mode
from ggd.graph import is_connected
from ggd.harness import random_connected_graph
from ggd.spectral import effective_resistance_exact


class TestModifiedResistance:
    def test_alpha_zero_is_resistance(self):
        g = triangle((1.0, 2.0, 3.0))
        assert modified_edge_resistance(g, 0, 1) == pytest.approx(
            effective_resistance_exact(g, 0, 1), rel=1e-12)

    def test_equal_features(self):
        g = Graph(2, [[0, 1]], [1.0], features=[[1.0, 1.0], [1.0, 1.0]])
        assert modified_edge_resistance(g, 0, 1, alpha=5) == pytest.approx(1.0, rel=1e-12)

    def test_feature_gap(self):
        g = Graph(2, [[0, 1]], [1.0], features=[[0.0, 0.0], [3.0, 4.0]])
        assert modified_edge_resistance(g, 0, 1, alpha=1) == pytest.approx(6.0, rel=1e-12)

    def test_alpha_without_features(self):
        with pytest.raises(ValueError):
            modified_edge_resistance(k2(), 0, 1, alpha=1)

    def test_not_an_edge(self):
        with pytest.raises(ValueError):
            modified_edge_resistance(path(3), 0, 2)

    def test_krylov_mode_agrees(self, rng):
        g = random_connected_graph(25, rng)
        np.testing.assert_allclose(edge_resistances(g, "krylov:25"), edge_resistances(g, "exact"),
                                   rtol=1e-6)

    @pytest.mark.parametrize("mode, n, expected", [
        ("auto", 100, ("exact", 0)),
        ("auto", 501, ("krylov", 50)),
        ("krylov:7", 100, ("krylov", 7)),
        ("krylov", 30, ("krylov", 30)),
        (("krylov", 9), 100, ("krylov", 9)),
        ("exact", 2000, ("exact", 0)),
    ])
    def test_parse_mode(self, mode, n, expected):
        assert parse_resistance_mode(mode, n) == expected

    @pytest.mark.parametrize("mode", ["fast", "krylov:0"])
    def test_bad_mode(self, mode):
        with pytest.raises(ValueError):
            parse_resistance_mode(mode, 10)


class TestContractEdge:
    def test_p3(self):
        assert contract_edge(path(3), 0, 1) == k2(1.0)

    @pytest.mark.parametrize("p, q", [(0, 1), (1, 2), (0, 2)])
    def test_triangle_merges_parallel_edges(self, p, q):
        assert contract_edge(triangle(), p, q) == k2(2.0)

    def test_k2_collapses(self):
        h = contract_edge(k2(), 0, 1)
        assert h.node_count == 1 and h.edge_count == 0

    def test_index_shift(self):
        g = Graph.from_edges(4, [(0, 1, 1.0), (1, 2, 2.0), (2, 3, 3.0)])
        assert contract_edge(g, 1, 2) == Graph.from_edges(3, [(0, 1, 1.0), (1, 2, 3.0)])

    def test_feature_average_weighted_by_degree(self):
        g = Graph(3, [[0, 1], [1, 2]], [1.0, 3.0], features=[[0.0], [4.0], [8.0]])
        h = contract_edge(g, 0, 1)
        # degrees 1 and 4
        np.testing.assert_allclose(h.features, [[(1 * 0 + 4 * 4) / 5], [8.0]])

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 2 ** 32 - 1), st.integers(3, 12))
    def test_total_weight_conserved(self, seed, n):
        rng = np.random.default_rng(seed)
        g = random_connected_graph(n, rng, weights=(0.5, 2.0))
        e = int(rng.integers(g.edge_count))
        p, q = map(int, g.edge_index[e])
        h = contract_edge(g, p, q)
        assert h.weights.sum() == pytest.approx(g.weights.sum() - g.weights[e], rel=1e-12)
        assert is_connected(h)


class TestCoarsenToSize:
    def test_single_step(self, rng):
        g = random_connected_graph(10, rng, weights=(0.5, 2.0))
        h, trace = coarsen_to_size(g, 9)
        r = edge_resistances(g)
        e = int(np.argmin(r))
        assert len(trace) == 1 and trace.steps[0].edge == tuple(map(int, g.edge_index[e]))
        assert h == contract_edge(g, *map(int, g.edge_index[e]))

    def test_heavy_edge_first(self):
        g = Graph.from_edges(3, [(0, 1, 10.0), (1, 2, 1.0), (0, 2, 1.0)])
        _, trace = coarsen_to_size(g, 2)
        assert trace.steps[0].edge == (0, 1)

    def test_ring8_to_4(self):
        h, trace = coarsen_to_size(ring(8), 4)
        assert h.node_count == 4 and len(trace) == 4 and is_connected(h)
        assert [s.node_count for s in trace.steps] == [7, 6, 5, 4]

    def test_ties_break_lexicographically(self):
        _, trace = coarsen_to_size(ring(6), 5)
        assert trace.steps[0].edge == (0, 1)

    @pytest.mark.parametrize("target", [0, 5, 6])
    def test_bad_target(self, target):
        with pytest.raises(InfeasibleError):
            coarsen_to_size(path(5), target)

    def test_disconnected(self):
        with pytest.raises(InfeasibleError):
            coarsen_to_size(Graph.from_edges(4, [(0, 1), (2, 3)]), 2)

    def test_batch_mode(self, rng):
        g = random_connected_graph(20, rng)
        h, trace = coarsen_to_size(g, 10, batch=4)
        assert h.node_count == 10 and len(trace) == 10 and is_connected(h)
        assert h.weights.sum() <= g.weights.sum()

    def test_batch_one_matches_default(self, rng):
        g = random_connected_graph(15, rng)
        assert coarsen_to_size(g, 7, batch=1)[0] == coarsen_to_size(g, 7)[0]

    def test_features_drive_choice(self):
        # a star: the feature gap makes edge (0, 3) the cheapest despite equal resistance
        feats = [[0.0], [5.0], [5.0], [0.0]]
        g = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)], features=feats)
        _, trace = coarsen_to_size(g, 3, alpha=1.0)
        assert trace.steps[0].edge == (0, 3)

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 2 ** 32 - 1), st.integers(4, 14))
    def test_result_connected_with_exact_size(self, seed, n):
        rng = np.random.default_rng(seed)
        g = random_connected_graph(n, rng)
        target = int(rng.integers(1, n))
        h, trace = coarsen_to_size(g, target)
        assert h.node_count == target and len(trace) == n - target
        assert target == 1 or is_connected(h)
