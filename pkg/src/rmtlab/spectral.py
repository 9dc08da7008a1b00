"""Spectral statistics of sampled adjacency matrices.

``trace_power_int`` is exact: tr(A^(2m)) = ||A^m||_F^2 for symmetric A, and
A^m is built by sparse-times-dense integer products. ``lambda1`` is a
Lanczos iteration with full reorthogonalization, certified by its
residual. ``full_spectrum`` is the dense cross-check path.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from ._validation import check_int
from .sampling import AdjacencyMatrix
from .walks import BudgetExceeded

__all__ = [
    "ConvergenceError",
    "trace_power_int",
    "lambda1",
    "full_spectrum",
    "spectrum_crosscheck",
    "TRACE_BUDGET",
]

TRACE_BUDGET = 10**11
_INT64_SAFE = 2**62
_DENSE_MAX = 64


class ConvergenceError(RuntimeError):
    """An iterative eigensolver stopped without certifying its result."""

    def __init__(self, message: str, estimate: float, residual: float):
        super().__init__(f"{message} (estimate={estimate!r}, residual={residual:.3e})")
        self.estimate = estimate
        self.residual = residual


def _object_power(adj: AdjacencyMatrix, base: np.ndarray, steps: int) -> np.ndarray:
    # rows of A @ B are sums of B's rows over neighbors; exact Python ints
    power = base
    for _ in range(steps):
        nxt = np.empty_like(power)
        for v in range(adj.n):
            nbrs = adj.neighbors(v)
            nxt[v] = power[nbrs].sum(axis=0) if len(nbrs) else 0
        power = nxt
    return power


def trace_power_int(adj: AdjacencyMatrix, m: int, budget: int = TRACE_BUDGET) -> int:
    """Exact integer tr(A^(2m)).

    Works in int64 while an a-priori bound (max degree)^k on the entries of
    A^k stays below 2^62, and switches to Python integers beyond that.
    """
    m = check_int(m, name="m", minimum=1)
    if m * adj.n * max(adj.nnz, 1) > budget:
        raise BudgetExceeded(
            f"m*n*nnz = {m * adj.n * adj.nnz} exceeds trace budget {budget}"
        )
    if adj.nnz == 0:
        return 0
    dmax = int(adj.degrees.max())
    if m == 1:
        return adj.nnz
    # dense products win for tiny matrices
    a = adj.to_dense(np.int64) if adj.n <= _DENSE_MAX else adj.to_sparse(np.int64)
    power = a.copy() if adj.n <= _DENSE_MAX else a.toarray()
    done = 1
    while done < m and dmax ** (done + 1) < _INT64_SAFE:
        power = a @ power
        done += 1
    if done < m:
        power = _object_power(adj, power.astype(object), m - done)
        return int(sum(int(x) * int(x) for x in power.ravel() if x))
    bound = dmax**m
    if adj.n * bound * bound < _INT64_SAFE:
        return int(np.einsum("ij,ij->", power, power))
    # each row sum of squares fits when n * bound^2 is small; otherwise go exact
    return sum(int(v) * int(v) for v in power.ravel() if v)


def _as_operator(adj):
    if isinstance(adj, AdjacencyMatrix):
        return adj.to_sparse(np.float64)
    if sp.issparse(adj):
        return sp.csr_matrix(adj, dtype=np.float64)
    arr = np.asarray(adj, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError("matrix must be square")
    return arr


def _one_norm(op) -> float:
    if sp.issparse(op):
        return float(abs(op).sum(axis=0).max()) if op.nnz else 0.0
    return float(np.abs(op).sum(axis=0).max()) if op.size else 0.0


def _start_vector(n: int) -> np.ndarray:
    # the all-ones direction overlaps the Perron vector of any nonnegative
    # matrix; the fixed perturbation covers general symmetric input
    v = np.ones(n) + 0.01 * np.random.default_rng(12345).standard_normal(n)
    return v / np.linalg.norm(v)


def _power_iteration(op, norm: float, tol: float, max_iter: int, v: np.ndarray):
    # shift by ||A||_1 so the top eigenvalue dominates in magnitude
    best, best_res = 0.0, np.inf
    for _ in range(max_iter):
        w = op @ v + norm * v
        v = w / np.linalg.norm(w)
        av = op @ v
        theta = float(v @ av)
        res = float(np.linalg.norm(av - theta * v))
        if res < best_res:
            best, best_res = theta, res
        if res <= tol:
            return theta, res
    raise ConvergenceError("power iteration did not converge", best, best_res)


def lambda1(adj, rel_tol: float = 1e-10, max_iter: int = 300, power_iter: int = 20000) -> float:
    """Largest eigenvalue of a symmetric matrix.

    Stops once ||A v - theta v|| <= rel_tol * ||A||_1 for the top Ritz
    pair. Falls back to shifted power iteration when Lanczos cannot certify
    within ``max_iter`` steps. The zero matrix returns 0.0.
    """
    op = _as_operator(adj)
    n = op.shape[0]
    norm = _one_norm(op)
    if norm == 0.0:
        return 0.0
    tol = rel_tol * norm
    k_max = min(n, max_iter)
    basis = np.zeros((k_max, n))
    alphas, betas = [], []
    q = _start_vector(n)
    best, best_res, best_vec = 0.0, np.inf, q
    for k in range(k_max):
        basis[k] = q
        w = op @ q
        alpha = float(q @ w)
        w -= alpha * q
        if k:
            w -= betas[-1] * basis[k - 1]
        # two passes of full reorthogonalization
        for _ in range(2):
            w -= basis[: k + 1].T @ (basis[: k + 1] @ w)
        beta = float(np.linalg.norm(w))
        alphas.append(alpha)
        tri = np.diag(alphas) + np.diag(betas, 1) + np.diag(betas, -1)
        evals, evecs = np.linalg.eigh(tri)
        theta, s = float(evals[-1]), evecs[:, -1]
        if abs(beta * s[-1]) <= tol or beta <= tol or k == k_max - 1:
            vec = basis[: k + 1].T @ s
            vec /= np.linalg.norm(vec)
            res = float(np.linalg.norm(op @ vec - theta * vec))
            if res < best_res:
                best, best_res, best_vec = theta, res, vec
            if res <= tol:
                return theta
            if beta <= tol:
                break
        betas.append(beta)
        q = w / beta
    try:
        theta, _ = _power_iteration(op, norm, tol, power_iter, best_vec)
    except ConvergenceError as exc:
        if exc.residual < best_res:
            best, best_res = exc.estimate, exc.residual
        raise ConvergenceError("lambda1 did not converge", best, best_res) from None
    return theta


def full_spectrum(adj, max_n: int = 512) -> np.ndarray:
    """All eigenvalues in ascending order (dense LAPACK symmetric solver)."""
    if isinstance(adj, AdjacencyMatrix):
        dense = adj.to_dense(np.float64)
    elif sp.issparse(adj):
        dense = adj.toarray().astype(np.float64)
    else:
        dense = np.asarray(adj, dtype=np.float64)
    if dense.ndim != 2 or dense.shape[0] != dense.shape[1]:
        raise ValueError("matrix must be square")
    if dense.shape[0] > max_n:
        raise ValueError(f"full_spectrum supports n <= {max_n}, got {dense.shape[0]}")
    if not np.allclose(dense, dense.T):
        raise ValueError("matrix must be symmetric")
    return np.linalg.eigvalsh(dense)


def spectrum_crosscheck(adj: AdjacencyMatrix, m: int, rel_tol: float = 1e-8) -> bool:
    """Compare exact traces and Lanczos lambda1 against the dense spectrum."""
    if adj.n > 256:
        raise ValueError(f"spectrum_crosscheck supports n <= 256, got {adj.n}")
    evals = full_spectrum(adj)
    exact = trace_power_int(adj, m)
    power_sum = float(np.sum(evals ** (2 * m)))
    if exact == 0:
        trace_ok = abs(power_sum) <= 1e-12
    else:
        trace_ok = abs(power_sum - exact) <= rel_tol * exact
    top = float(evals[-1])
    lam = lambda1(adj)
    return bool(trace_ok and abs(lam - top) <= rel_tol * (1 + abs(top)))
