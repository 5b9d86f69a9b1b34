import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import k2, path, triangle, weighted_random_graph
from ggd import (InfeasibleError, NumericalError, effective_resistance_exact,
                 effective_resistance_krylov, generalized_eig_spd, modified_laplacian)
from ggd.graph import Graph, build_adjacency, build_laplacian
from ggd.harness import random_connected_graph
from ggd.spectral import extreme_generalized_eigs, krylov_basis, resistance_matrix, sym_eig


def pinv_resistance(g, p, q):
    lp = np.linalg.pinv(build_laplacian(build_adjacency(g)))
    return lp[p, p] + lp[q, q] - 2 * lp[p, q]


def random_spd(rng, n):
    m = rng.normal(size=(n, n))
    return m @ m.T + n * np.eye(n)


class TestSymEig:
    def test_identity(self):
        np.testing.assert_array_equal(sym_eig(np.eye(2)).values, [1, 1])

    def test_k2(self):
        e = sym_eig(np.array([[1.0, -1.0], [-1.0, 1.0]]))
        np.testing.assert_allclose(e.values, [0, 2], atol=1e-15)
        v = e.vectors
        assert abs(abs(v[0, 0]) - abs(v[1, 0])) < 1e-15 and v[0, 1] * v[1, 1] < 0

    def test_triangle(self):
        np.testing.assert_allclose(sym_eig(build_laplacian(build_adjacency(triangle()))).values,
                                   [0, 3, 3], atol=1e-14)

    def test_reconstructs(self, rng):
        m = random_spd(rng, 7)
        e = sym_eig(m)
        np.testing.assert_allclose(e.vectors @ np.diag(e.values) @ e.vectors.T, m, atol=1e-10)

    def test_rejects_asymmetric(self):
        with pytest.raises(ValueError):
            sym_eig(np.array([[1.0, 2.0], [0.0, 1.0]]))


class TestGeneralizedEig:
    def test_identity_pencil(self, rng):
        m = random_spd(rng, 5)
        np.testing.assert_allclose(generalized_eig_spd(m, m).values, 1.0, rtol=1e-12)

    def test_k2_hand_values(self):
        eps = 1e-4
        s = generalized_eig_spd(modified_laplacian(k2(1.0), eps), modified_laplacian(k2(2.0), eps))
        # the pencil has condition number ~2/eps, so roughly 1e-12 relative error is expected
        np.testing.assert_allclose(s.values, [(4 + eps) / (2 + eps), 1.0], rtol=1e-10)

    @pytest.mark.parametrize("c", [0.5, 3.0, 17.0])
    def test_scaling(self, rng, c):
        m = random_spd(rng, 4)
        np.testing.assert_allclose(generalized_eig_spd(m, c * m).values, c, rtol=1e-12)

    def test_matches_scipy_and_vectors(self, rng):
        import scipy.linalg
        a, b = random_spd(rng, 6), random_spd(rng, 6)
        s = generalized_eig_spd(a, b)
        np.testing.assert_allclose(s.values, scipy.linalg.eigh(b, a, eigvals_only=True)[::-1],
                                   rtol=1e-10)
        np.testing.assert_allclose(b @ s.vectors, a @ s.vectors * s.values, atol=1e-9)
        assert np.all(np.diff(s.values) <= 0)

    def test_not_spd(self):
        with pytest.raises(NumericalError):
            generalized_eig_spd(np.eye(2), np.diag([1.0, -1.0]))

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            generalized_eig_spd(np.eye(2), np.eye(3))


class TestExtremeEigs:
    def test_half_covers_all(self, rng):
        a, b = random_spd(rng, 6), random_spd(rng, 6)
        full = generalized_eig_spd(a, b, vectors=False).values
        np.testing.assert_allclose(extreme_generalized_eigs(a, b, 3).values, full)

    def test_identical(self, rng):
        a = random_spd(rng, 8)
        np.testing.assert_allclose(extreme_generalized_eigs(a, a, 2).values, 1.0, rtol=1e-12)

    def test_subset_of_full(self, rng):
        g1, g2 = random_connected_graph(20, rng), random_connected_graph(20, rng)
        l1, l2 = modified_laplacian(g1), modified_laplacian(g2)
        full = generalized_eig_spd(l1, l2, vectors=False).values
        part = extreme_generalized_eigs(l1, l2, 4)
        assert part.partial
        np.testing.assert_allclose(part.values, np.r_[full[:4], full[-4:]], rtol=1e-10)

    def test_iterative_path(self, rng, monkeypatch):
        import ggd.spectral as spectral
        g1, g2 = random_connected_graph(60, rng), random_connected_graph(60, rng)
        l1, l2 = modified_laplacian(g1), modified_laplacian(g2)
        full = generalized_eig_spd(l1, l2, vectors=False).values
        monkeypatch.setattr(spectral, "DENSE_EIG_LIMIT", 10)
        part = spectral.extreme_generalized_eigs(l1, l2, 3)
        np.testing.assert_allclose(part.values, np.r_[full[:3], full[-3:]], rtol=1e-8)

    @pytest.mark.parametrize("k", [0, 4])
    def test_k_range(self, k):
        with pytest.raises(ValueError):
            extreme_generalized_eigs(np.eye(7), np.eye(7), k)


class TestEffectiveResistance:
    @pytest.mark.parametrize("g, p, q, expected", [
        (k2(), 0, 1, 1.0),
        (path(3), 0, 2, 2.0),
        (triangle(), 0, 1, 2 / 3),
        (triangle(), 1, 2, 2 / 3),
    ])
    def test_closed_forms(self, g, p, q, expected):
        r = effective_resistance_exact(g, p, q)
        assert abs(r - expected) <= 1e-12
        assert abs(r - pinv_resistance(g, p, q)) <= 1e-9

    def test_same_node(self):
        assert effective_resistance_exact(triangle(), 1, 1) == 0.0

    def test_disconnected(self):
        with pytest.raises(InfeasibleError):
            effective_resistance_exact(Graph.from_edges(3, [(0, 1)]), 0, 1)

    def test_matrix_matches_pinv(self, rng):
        g = weighted_random_graph(15, rng)
        lp = np.linalg.pinv(build_laplacian(build_adjacency(g)))
        d = np.diag(lp)
        np.testing.assert_allclose(resistance_matrix(g), d[:, None] + d[None, :] - 2 * lp,
                                   atol=1e-10)

    def test_series_and_parallel_weights(self):
        # weight is conductance: a 2-edge then a 3-edge in series give 1/2 + 1/3
        g = Graph.from_edges(3, [(0, 1, 2.0), (1, 2, 3.0)])
        assert abs(effective_resistance_exact(g, 0, 2) - 5 / 6) < 1e-12


class TestKrylov:
    def test_order_one(self, rng):
        x = rng.normal(size=5)
        b = krylov_basis(rng.normal(size=(5, 5)), x, 1)
        np.testing.assert_allclose(b.vectors[:, 0], x / np.linalg.norm(x))

    def test_identity_breaks_down(self):
        b = krylov_basis(np.eye(4), np.ones(4), 3)
        assert b.order == 1 and b.breakdown

    def test_p3_full_basis(self):
        b = krylov_basis(build_adjacency(path(3)), np.array([1.0, 0, 0]), 3)
        assert b.order == 3 and not b.breakdown
        np.testing.assert_allclose(b.vectors.T @ b.vectors, np.eye(3), atol=1e-14)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 2 ** 32 - 1), st.integers(3, 12))
    def test_orthonormal_and_spans_krylov(self, seed, n):
        rng = np.random.default_rng(seed)
        a = rng.normal(size=(n, n))
        a = a + a.T
        x = rng.normal(size=n)
        m = min(n, 4)
        q = krylov_basis(a, x, m).vectors
        np.testing.assert_allclose(q.T @ q, np.eye(q.shape[1]), atol=1e-10)
        k = np.column_stack([np.linalg.matrix_power(a, i) @ x for i in range(q.shape[1])])
        resid = k - q @ (q.T @ k)
        assert np.linalg.norm(resid) <= 1e-8 * np.linalg.norm(k)

    def test_p3_full_order_exact(self):
        assert abs(effective_resistance_krylov(path(3), 0, 2, 3) - 2.0) <= 2e-6

    def test_k2_full_order_exact(self):
        assert abs(effective_resistance_krylov(k2(), 0, 1, 2) - 1.0) <= 1e-6

    def test_orthogonal_start_gives_zero(self):
        # the constant vector is orthogonal to b_pq and lies in the Laplacian null space
        r = effective_resistance_krylov(triangle(), 0, 1, 1, start=np.ones(3))
        assert r == 0.0

    def test_order_out_of_range(self):
        with pytest.raises(ValueError):
            effective_resistance_krylov(k2(), 0, 1, 3)

    def test_full_order_random_graphs(self, rng):
        for _ in range(10):
            g = weighted_random_graph(int(rng.integers(5, 30)), rng)
            p, q = rng.choice(g.node_count, 2, replace=False)
            exact = effective_resistance_exact(g, p, q)
            approx = effective_resistance_krylov(g, p, q, g.node_count)
            assert abs(approx - exact) <= 1e-6 * exact

    def test_low_order_is_a_lower_bound(self, rng):
        # Rayleigh-Ritz on a subspace containing b_pq underestimates b^T L^+ b
        g = random_connected_graph(30, rng)
        exact = effective_resistance_exact(g, 0, 1)
        estimates = [effective_resistance_krylov(g, 0, 1, m) for m in (2, 5, 10, 30)]
        assert all(e <= exact * (1 + 1e-9) for e in estimates)
        assert np.all(np.diff(estimates) >= -1e-12)
