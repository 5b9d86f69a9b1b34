import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import asymmetric_graph, k2, path, ring
from ggd import InfeasibleError, match_graphs, permute_graph, similarity_matrix
from ggd.graph import apply_permutation, build_adjacency
from ggd.matching import (assignment_objective, cauchy_weight, default_eta, is_bijection,
                          round_greedy, round_lap)


def similarity_oracle(a1, a2, eta):
    """Direct double sum over eigenpairs: sum_ij w_ij u_i u_i^T J v_j v_j^T."""
    l1, u = np.linalg.eigh(a1)
    l2, v = np.linalg.eigh(a2)
    n = len(l1)
    j = np.ones((n, n))
    out = np.zeros((n, n))
    for i in range(n):
        for k in range(n):
            w = 1.0 / ((l1[i] - l2[k]) ** 2 + eta ** 2)
            out += w * np.outer(u[:, i], u[:, i]) @ j @ np.outer(v[:, k], v[:, k])
    return out


def best_objective(x):
    n = len(x)
    return max(x[np.arange(n), list(p)].sum() for p in itertools.permutations(range(n)))


class TestCauchyWeight:
    def test_zero_gap(self):
        assert cauchy_weight(0.3, 0.3, 0.5) == pytest.approx(4.0, rel=1e-15)

    def test_value(self):
        assert cauchy_weight(0.0, 1.0, 0.5) == pytest.approx(0.8, rel=1e-15)

    @settings(max_examples=50)
    @given(st.floats(-10, 10), st.floats(-10, 10), st.floats(0.01, 5))
    def test_symmetric(self, x, y, eta):
        assert cauchy_weight(x, y, eta) == cauchy_weight(y, x, eta)

    def test_bad_eta(self):
        with pytest.raises(ValueError):
            cauchy_weight(0, 1, 0.0)

    @pytest.mark.parametrize("n, eta", [(10, 0.5), (99, 0.5), (100, 0.2), (5000, 0.2)])
    def test_default_eta(self, n, eta):
        assert default_eta(n) == eta


class TestSimilarity:
    def test_k2_self_similarity(self):
        # only the constant eigenvector has a nonzero sum, so every entry is 1/eta^2
        a = build_adjacency(k2())
        x = similarity_matrix(a, a, 0.5)
        np.testing.assert_allclose(x, similarity_oracle(a, a, 0.5), atol=1e-12)
        np.testing.assert_allclose(x, np.full((2, 2), 4.0), rtol=1e-14)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 2 ** 32 - 1), st.integers(2, 12), st.floats(0.05, 2.0))
    def test_self_similarity_is_psd(self, seed, n, eta):
        # the Cauchy kernel is positive definite, so x_ii + x_jj >= 2 x_ij and the
        # identity is an optimal self-assignment
        a = np.triu(np.random.default_rng(seed).random((n, n)) < 0.4, 1).astype(float)
        a = a + a.T
        x = similarity_matrix(a, a, eta)
        assert np.linalg.eigvalsh(0.5 * (x + x.T)).min() >= -1e-9 * np.abs(x).max()
        assert assignment_objective(x, np.arange(n)) >= assignment_objective(x, round_lap(x)) - 1e-9

    def test_single_node(self):
        x = similarity_matrix(np.zeros((1, 1)), np.zeros((1, 1)), 0.5)
        np.testing.assert_allclose(x, [[4.0]])

    def test_random_pair_matches_oracle(self, rng):
        a1 = np.triu(rng.random((6, 6)) < 0.5, 1).astype(float)
        a2 = np.triu(rng.random((6, 6)) < 0.5, 1).astype(float)
        a1, a2 = a1 + a1.T, a2 + a2.T
        np.testing.assert_allclose(similarity_matrix(a1, a2, 0.3), similarity_oracle(a1, a2, 0.3),
                                   atol=1e-8)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            similarity_matrix(np.zeros((2, 2)), np.zeros((3, 3)), 0.5)

    def test_equivariance(self, rng):
        g = asymmetric_graph(10, rng)
        a = build_adjacency(g)
        p = rng.permutation(10)
        x = similarity_matrix(a, apply_permutation(a, p), 0.5)
        base = similarity_matrix(a, a, 0.5)
        np.testing.assert_allclose(x[:, p], base, atol=1e-10)


class TestRounding:
    def test_identity(self):
        np.testing.assert_array_equal(round_lap(np.eye(3)), [0, 1, 2])

    def test_swap(self):
        x = np.array([[1.0, 2.0], [2.0, 1.0]])
        p = round_lap(x)
        np.testing.assert_array_equal(p, [1, 0])
        assert assignment_objective(x, p) == 4.0

    @pytest.mark.parametrize("seed", range(5))
    def test_exhaustive_oracle(self, seed):
        x = np.random.default_rng(seed).random((5, 5))
        assert assignment_objective(x, round_lap(x)) == pytest.approx(best_objective(x), abs=1e-12)

    def test_near_constant_matrix_prefers_identity(self):
        x = np.full((6, 6), 3.0) + 1e-14 * np.random.default_rng(0).random((6, 6))
        np.testing.assert_array_equal(round_lap(x), np.arange(6))

    def test_non_finite(self):
        with pytest.raises(ValueError):
            round_lap(np.array([[np.nan, 0.0], [0.0, 1.0]]))

    def test_greedy_identity(self):
        np.testing.assert_array_equal(round_greedy(np.eye(3)), [0, 1, 2])

    def test_greedy_tie(self):
        p = round_greedy(np.ones((2, 2)))
        np.testing.assert_array_equal(p, [0, 0])
        assert not is_bijection(p)

    @pytest.mark.parametrize("seed", range(5))
    def test_greedy_agrees_on_dominant_diagonal(self, seed):
        rng = np.random.default_rng(seed)
        perm = rng.permutation(6)
        x = rng.random((6, 6))
        x[np.arange(6), perm] += 10
        np.testing.assert_array_equal(round_greedy(x), round_lap(x))


class TestMatchGraphs:
    def test_planted_permutation_n20(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            g1 = asymmetric_graph(20, rng)
            pi = rng.permutation(20)
            np.testing.assert_array_equal(match_graphs(g1, permute_graph(g1, pi), eta=0.2), pi)

    def test_self_match_is_identity(self, rng):
        g = asymmetric_graph(15, rng)
        np.testing.assert_array_equal(match_graphs(g, g), np.arange(15))

    def test_self_match_is_automorphism(self):
        g = path(5)
        p = match_graphs(g, g)
        assert permute_graph(g, p) == g

    @pytest.mark.parametrize("rounding", ["lap", "greedy"])
    def test_always_bijection(self, rng, rounding):
        p = match_graphs(ring(8), path(8), rounding=rounding)
        assert is_bijection(p)

    def test_size_mismatch(self):
        with pytest.raises(InfeasibleError):
            match_graphs(k2(), path(3))

    def test_unknown_rounding(self):
        with pytest.raises(ValueError):
            match_graphs(k2(), k2(), rounding="hungarian")
