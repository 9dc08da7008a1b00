"""Reproducible sampling of G(n, p) adjacency matrices.

Streams come from numpy's Philox4x64 counter-based generator. The 128-bit
Philox key is ``replicate_index << 64 | master_seed``, so every
(master_seed, replicate_index) pair owns a distinct, independent stream and
a replicate's draws do not depend on which worker produced it.

Slots are the upper-triangular positions (i, j), i <= j with loops and
i < j without, in row-major order. For p < 0.01 present slots are found by
geometric skipping, otherwise by chunked uniform draws.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from ._validation import check_int

__all__ = [
    "StreamSeed",
    "AdjacencyMatrix",
    "sample_adjacency",
    "slot_count",
    "GEOMETRIC_THRESHOLD",
]

GEOMETRIC_THRESHOLD = 0.01
_CHUNK = 1 << 22
_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class StreamSeed:
    master_seed: int
    replicate_index: int = 0

    def __post_init__(self):
        if not 0 <= self.master_seed <= _MASK64:
            raise ValueError(f"master_seed must fit in 64 bits, got {self.master_seed}")
        if not 0 <= self.replicate_index <= _MASK64:
            raise ValueError(f"replicate_index must fit in 64 bits, got {self.replicate_index}")

    @property
    def key(self) -> int:
        return (self.replicate_index << 64) | self.master_seed

    def generator(self) -> np.random.Generator:
        return np.random.Generator(np.random.Philox(key=self.key))


class AdjacencyMatrix:
    """Symmetric 0/1 matrix in compressed row form.

    ``indptr``/``indices`` follow the CSR convention: the sorted neighbors
    of vertex v are ``indices[indptr[v]:indptr[v + 1]]``. A loop at v lists
    v once among its own neighbors.
    """

    def __init__(self, n: int, indptr, indices, loops: bool = True):
        self.n = check_int(n, name="n", minimum=1)
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self.indices = np.asarray(indices, dtype=np.int64)
        self.loops = bool(loops)
        if self.indptr.shape != (self.n + 1,):
            raise ValueError("indptr must have length n + 1")
        n_loops = int(np.count_nonzero(self.indices == np.repeat(np.arange(self.n), np.diff(self.indptr))))
        if n_loops and not self.loops:
            raise ValueError("matrix has loops but loops=False")
        self.edge_count = (len(self.indices) - n_loops) // 2 + n_loops

    @classmethod
    def from_edges(cls, n: int, rows, cols, loops: bool = True) -> "AdjacencyMatrix":
        """Build from upper-triangular slot coordinates (each edge once)."""
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        off = rows != cols
        r = np.concatenate([rows, cols[off]])
        c = np.concatenate([cols, rows[off]])
        order = np.lexsort((c, r))
        r, c = r[order], c[order]
        if len(r) > 1 and np.any((r[1:] == r[:-1]) & (c[1:] == c[:-1])):
            raise ValueError("duplicate edges")
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(r, minlength=n), out=indptr[1:])
        return cls(n, indptr, c, loops)

    @classmethod
    def from_dense(cls, dense, loops: bool | None = None) -> "AdjacencyMatrix":
        arr = np.asarray(dense)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("dense adjacency must be square")
        if not np.array_equal(arr, arr.T):
            raise ValueError("adjacency must be symmetric")
        if not np.isin(arr, (0, 1)).all():
            raise ValueError("adjacency entries must be 0 or 1")
        has_loops = bool(np.any(np.diag(arr)))
        if loops is None:
            loops = has_loops
        rows, cols = np.nonzero(np.triu(arr))
        return cls.from_edges(arr.shape[0], rows, cols, loops)

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    @property
    def nnz(self) -> int:
        return len(self.indices)

    def to_sparse(self, dtype=np.int64) -> sp.csr_matrix:
        data = np.ones(self.nnz, dtype=dtype)
        return sp.csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))

    def to_dense(self, dtype=np.int64) -> np.ndarray:
        dense = np.zeros((self.n, self.n), dtype=dtype)
        dense[np.repeat(np.arange(self.n), self.degrees), self.indices] = 1
        return dense

    def __eq__(self, other):
        if not isinstance(other, AdjacencyMatrix):
            return NotImplemented
        return (
            self.n == other.n
            and self.loops == other.loops
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
        )

    def __repr__(self):
        return f"AdjacencyMatrix(n={self.n}, edges={self.edge_count}, loops={self.loops})"


def slot_count(n: int, loops: bool) -> int:
    return n * (n + 1) // 2 if loops else n * (n - 1) // 2


def _row_offsets(n: int, loops: bool) -> np.ndarray:
    lengths = np.arange(n, 0, -1, dtype=np.int64)
    if not loops:
        lengths -= 1
    return np.concatenate([[0], np.cumsum(lengths)])


def _geometric_slots(rng: np.random.Generator, p: float, total: int) -> np.ndarray:
    found = []
    position = -1
    mean = total * p
    batch = int(mean + 6 * np.sqrt(mean) + 16)
    while True:
        gaps = rng.geometric(p, size=batch)
        idx = position + np.cumsum(gaps)
        keep = idx[idx < total]
        found.append(keep)
        if len(keep) < len(idx):
            break
        position = int(idx[-1])
        batch = max(16, batch // 4)
    return np.concatenate(found)


def _dense_slots(rng: np.random.Generator, p: float, total: int) -> np.ndarray:
    found = []
    for start in range(0, total, _CHUNK):
        size = min(_CHUNK, total - start)
        found.append(start + np.flatnonzero(rng.random(size) < p))
    return np.concatenate(found) if found else np.empty(0, dtype=np.int64)


def sample_adjacency(n: int, p: float, loops: bool = True, seed: StreamSeed | int = 0) -> AdjacencyMatrix:
    """Draw one adjacency matrix with independent Bernoulli(p) slots."""
    n = check_int(n, name="n", minimum=1)
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    if not isinstance(seed, StreamSeed):
        seed = StreamSeed(int(seed))
    total = slot_count(n, loops)
    if p == 0.0 or total == 0:
        idx = np.empty(0, dtype=np.int64)
    else:
        rng = seed.generator()
        if p < GEOMETRIC_THRESHOLD:
            idx = _geometric_slots(rng, p, total)
        else:
            idx = _dense_slots(rng, p, total)
    offsets = _row_offsets(n, loops)
    rows = np.searchsorted(offsets, idx, side="right") - 1
    cols = idx - offsets[rows] + rows + (0 if loops else 1)
    return AdjacencyMatrix.from_edges(n, rows, cols, loops)
