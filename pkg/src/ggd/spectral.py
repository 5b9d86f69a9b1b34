"""Symmetric and generalized eigenproblems, Krylov bases and effective resistance."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse.linalg

from .exceptions import InfeasibleError, NumericalError
from .graph import Graph, build_adjacency, build_laplacian, is_connected

# above this size extreme pencil eigenvalues come from an iterative solver
DENSE_EIG_LIMIT = 400


@dataclass(frozen=True)
class EigDecomposition:
    values: np.ndarray  # ascending
    vectors: np.ndarray  # orthonormal columns


@dataclass(frozen=True)
class GeneralizedSpectrum:
    """Eigenvalues of ``inv(l1) @ l2`` in descending order.

    ``vectors[:, i]`` solves ``l2 x = values[i] * l1 x`` when available.
    ``partial`` marks a spectrum holding only the extreme eigenvalues.
    """

    values: np.ndarray
    vectors: np.ndarray | None = None
    partial: bool = False


@dataclass(frozen=True)
class KrylovBasis:
    vectors: np.ndarray  # (n, order), orthonormal columns
    requested: int
    breakdown: bool

    @property
    def order(self) -> int:
        return self.vectors.shape[1]


def _check_symmetric(m: np.ndarray, name: str = "matrix") -> np.ndarray:
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be square, got shape {m.shape}")
    scale = max(np.abs(m).max(initial=0.0), 1e-300)
    if np.abs(m - m.T).max(initial=0.0) > 1e-10 * scale:
        raise ValueError(f"{name} is not symmetric")
    return m


def sym_eig(m: np.ndarray) -> EigDecomposition:
    """Eigendecomposition of a symmetric matrix, eigenvalues ascending."""
    m = _check_symmetric(m)
    try:
        vals, vecs = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"symmetric eigensolver did not converge: {exc}") from None
    return EigDecomposition(vals, vecs)


def _cholesky(m: np.ndarray, name: str) -> np.ndarray:
    try:
        return scipy.linalg.cholesky(m, lower=False)
    except np.linalg.LinAlgError:
        raise NumericalError(f"{name} is not positive definite (Cholesky failed)") from None


def generalized_eig_spd(l1: np.ndarray, l2: np.ndarray, vectors: bool = True) -> GeneralizedSpectrum:
    """Spectrum of the pencil ``l2 x = lambda l1 x`` for SPD ``l1``, ``l2``.

    ``l1 = R^T R`` is factored by Cholesky and the symmetric matrix
    ``R^-T l2 R^-1`` is diagonalised; no explicit inverse is formed.
    """
    l1 = _check_symmetric(l1, "l1")
    l2 = _check_symmetric(l2, "l2")
    if l1.shape != l2.shape:
        raise ValueError(f"dimension mismatch: {l1.shape} vs {l2.shape}")
    r = _cholesky(l1, "l1")
    _cholesky(l2, "l2")
    # c = R^-T l2 R^-1
    tmp = scipy.linalg.solve_triangular(r, l2, trans="T", lower=False)
    c = scipy.linalg.solve_triangular(r, tmp.T, trans="T", lower=False).T
    c = 0.5 * (c + c.T)
    try:
        if vectors:
            vals, y = np.linalg.eigh(c)
        else:
            vals, y = np.linalg.eigvalsh(c), None
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"generalized eigensolver did not converge: {exc}") from None
    if vals[0] <= 0:
        raise NumericalError("pencil has a non-positive eigenvalue; inputs are not SPD")
    x = None
    if y is not None:
        x = scipy.linalg.solve_triangular(r, y, lower=False)[:, ::-1]
    return GeneralizedSpectrum(vals[::-1].copy(), x)


def extreme_generalized_eigs(l1: np.ndarray, l2: np.ndarray, k: int) -> GeneralizedSpectrum:
    """The ``k`` largest and ``k`` smallest eigenvalues of the pencil ``(l1, l2)``.

    Small problems use the dense solver.  Larger ones run ARPACK twice: once
    on ``(l2, l1)`` for the largest eigenvalues and once on the reciprocal
    pencil ``(l1, l2)`` for the smallest ones.
    """
    n = np.shape(l1)[0]
    if not 1 <= k <= n // 2:
        raise ValueError(f"k must lie in [1, {n // 2}], got {k}")
    if n <= DENSE_EIG_LIMIT or 2 * k >= n - 1:
        full = generalized_eig_spd(l1, l2, vectors=False).values
        vals = np.concatenate([full[:k], full[n - k:]])
        return GeneralizedSpectrum(vals, None, partial=2 * k < n)
    l1 = _check_symmetric(l1, "l1")
    l2 = _check_symmetric(l2, "l2")
    try:
        top = scipy.sparse.linalg.eigsh(l2, k=k, M=l1, which="LA", return_eigenvectors=False,
                                        tol=1e-12, maxiter=100 * n)
        inv_bottom = scipy.sparse.linalg.eigsh(l1, k=k, M=l2, which="LA",
                                               return_eigenvectors=False, tol=1e-12,
                                               maxiter=100 * n)
    except scipy.sparse.linalg.ArpackNoConvergence as exc:
        raise NumericalError(f"ARPACK did not converge: {exc}") from None
    vals = np.concatenate([np.sort(top)[::-1], np.sort(1.0 / inv_bottom)[::-1]])
    return GeneralizedSpectrum(vals, None, partial=True)


def _require_connected(g: Graph) -> None:
    if not is_connected(g):
        raise InfeasibleError("effective resistance needs a connected graph")


def _check_nodes(g: Graph, p: int, q: int) -> None:
    if not (0 <= p < g.node_count and 0 <= q < g.node_count):
        raise IndexError(f"node pair ({p}, {q}) out of range for n={g.node_count}")


def effective_resistance_exact(g: Graph, p: int, q: int) -> float:
    """Effective resistance between ``p`` and ``q`` from the Laplacian eigensystem.

    Returns 0 for ``p == q``.
    """
    _check_nodes(g, p, q)
    _require_connected(g)
    if p == q:
        return 0.0
    eig = sym_eig(build_laplacian(build_adjacency(g)))
    proj = eig.vectors[p, 1:] - eig.vectors[q, 1:]
    return float(np.sum(proj ** 2 / eig.values[1:]))


def resistance_matrix(g: Graph) -> np.ndarray:
    """All-pairs effective resistances (dense), from one eigendecomposition."""
    _require_connected(g)
    eig = sym_eig(build_laplacian(build_adjacency(g)))
    u = eig.vectors[:, 1:] / np.sqrt(eig.values[1:])
    pinv = u @ u.T
    d = np.diag(pinv)
    r = d[:, None] + d[None, :] - 2.0 * pinv
    np.fill_diagonal(r, 0.0)
    return np.maximum(r, 0.0)


def krylov_basis(a: np.ndarray, x: np.ndarray, m: int, tol: float = 1e-12) -> KrylovBasis:
    """Orthonormal basis of ``span{x, Ax, ..., A^(m-1) x}``.

    Vectors are generated Arnoldi-style (``A`` times the newest basis vector)
    with two passes of Gram-Schmidt.  The iteration stops early when the new
    direction's norm drops below ``tol`` times its norm before
    orthogonalization; ``breakdown`` is then set.
    """
    a = np.asarray(a, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    n = a.shape[0]
    if not 1 <= m <= n:
        raise ValueError(f"order m must lie in [1, {n}], got {m}")
    nx = np.linalg.norm(x)
    if nx == 0:
        raise ValueError("start vector must be nonzero")
    q = np.zeros((n, m))
    q[:, 0] = x / nx
    order = 1
    breakdown = False
    while order < m:
        w = a @ q[:, order - 1]
        before = np.linalg.norm(w)
        for _ in range(2):
            w -= q[:, :order] @ (q[:, :order].T @ w)
        after = np.linalg.norm(w)
        if before == 0 or after < tol * before:
            breakdown = True
            break
        q[:, order] = w / after
        order += 1
    return KrylovBasis(q[:, :order].copy(), m, breakdown)


def effective_resistance_krylov(g: Graph, p: int, q: int, m: int,
                                start: np.ndarray | None = None,
                                null_tol: float = 1e-12) -> float:
    """Effective resistance estimated from an order-``m`` Krylov subspace of ``A``.

    The Krylov basis is rotated by Rayleigh-Ritz so that its vectors
    approximate Laplacian eigenvectors, then
    ``sum_i (u_i^T b_pq)^2 / (u_i^T L u_i)`` is summed, skipping directions
    with ``u_i^T L u_i < null_tol`` (the constant vector, orthogonal to
    ``b_pq``).  With ``m = n`` and no breakdown the result is exact.

    The default start vector is ``b_pq`` itself, normalised.
    """
    _check_nodes(g, p, q)
    _require_connected(g)
    if not 1 <= m <= g.node_count:
        raise ValueError(f"order m must lie in [1, {g.node_count}], got {m}")
    if p == q:
        return 0.0
    a = build_adjacency(g)
    return krylov_resistance(a, build_laplacian(a), p, q, m, start, null_tol)


def krylov_resistance(a: np.ndarray, lap: np.ndarray, p: int, q: int, m: int,
                      start: np.ndarray | None = None, null_tol: float = 1e-12) -> float:
    """Matrix-level core of :func:`effective_resistance_krylov` (no validation)."""
    b = np.zeros(a.shape[0])
    b[p], b[q] = 1.0, -1.0
    qm = krylov_basis(a, b if start is None else start, m).vectors
    ritz_vals, s = np.linalg.eigh(qm.T @ lap @ qm)
    coeff = (qm @ s).T @ b
    keep = ritz_vals >= null_tol
    return float(np.sum(coeff[keep] ** 2 / ritz_vals[keep]))
