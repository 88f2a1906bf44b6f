"""Sparse matrices over F2 and rank by Gaussian elimination."""

from __future__ import annotations

from collections.abc import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

__all__ = ["SparseF2Matrix", "rank_f2", "rank_f2_dense"]


class SparseF2Matrix:
    """A 0/1 matrix stored as sorted column-index lists per row (CSR without data)."""

    __slots__ = ("n_rows", "n_cols", "indptr", "indices")

    def __init__(self, n_rows: int, n_cols: int, indptr: np.ndarray, indices: np.ndarray):
        self.n_rows = int(n_rows)
        self.n_cols = int(n_cols)
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self.indices = np.asarray(indices, dtype=np.int64)
        if self.indptr.shape != (self.n_rows + 1,):
            raise ValueError("indptr must have n_rows + 1 entries")
        if len(self.indices) and (self.indices.min() < 0 or self.indices.max() >= self.n_cols):
            raise ValueError("column index out of range")

    @classmethod
    def from_coo(cls, n_rows: int, n_cols: int, rows: np.ndarray, cols: np.ndarray) -> SparseF2Matrix:
        """Build from coordinate lists; repeated entries cancel mod 2."""
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        if len(rows):
            key = rows * max(n_cols, 1) + cols
            key, counts = np.unique(key, return_counts=True)
            key = key[counts % 2 == 1]
            rows, cols = np.divmod(key, max(n_cols, 1))
        indptr = np.zeros(n_rows + 1, dtype=np.int64)
        np.add.at(indptr, rows + 1, 1)
        return cls(n_rows, n_cols, np.cumsum(indptr), cols)

    @classmethod
    def from_rows(cls, n_cols: int, rows: Sequence[Iterable[int]]) -> SparseF2Matrix:
        r, c = [], []
        for i, row in enumerate(rows):
            for j in row:
                r.append(i)
                c.append(j)
        return cls.from_coo(len(rows), n_cols, np.array(r, dtype=np.int64), np.array(c, dtype=np.int64))

    @classmethod
    def from_dense(cls, a: np.ndarray) -> SparseF2Matrix:
        a = np.asarray(a) % 2
        r, c = np.nonzero(a)
        return cls.from_coo(a.shape[0], a.shape[1], r, c)

    @classmethod
    def zeros(cls, n_rows: int, n_cols: int) -> SparseF2Matrix:
        return cls(n_rows, n_cols, np.zeros(n_rows + 1, dtype=np.int64), np.zeros(0, dtype=np.int64))

    @property
    def shape(self) -> tuple[int, int]:
        return self.n_rows, self.n_cols

    @property
    def nnz(self) -> int:
        return len(self.indices)

    def row(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i] : self.indptr[i + 1]]

    def to_scipy(self) -> sp.csr_matrix:
        data = np.ones(len(self.indices), dtype=np.int64)
        return sp.csr_matrix((data, self.indices, self.indptr), shape=self.shape)

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.shape, dtype=np.uint8)
        rows = np.repeat(np.arange(self.n_rows), np.diff(self.indptr))
        out[rows, self.indices] = 1
        return out

    def __matmul__(self, other: SparseF2Matrix) -> SparseF2Matrix:
        if self.n_cols != other.n_rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        prod = (self.to_scipy() @ other.to_scipy()).tocoo()
        odd = prod.data % 2 == 1
        return SparseF2Matrix.from_coo(self.n_rows, other.n_cols, prod.row[odd], prod.col[odd])

    def is_zero(self) -> bool:
        return self.nnz == 0

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseF2Matrix):
            return NotImplemented
        return (
            self.shape == other.shape
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
        )

    def __repr__(self) -> str:
        return f"SparseF2Matrix({self.n_rows}x{self.n_cols}, nnz={self.nnz})"


def rank_f2(m: SparseF2Matrix | np.ndarray) -> int:
    """Rank over F2.

    Rows become Python integers used as bitsets, so each row operation is a
    single big-int XOR.  Pivots are kept in a dict keyed by the row's lowest
    set bit, which makes the elimination order (and result) deterministic.
    """
    if not isinstance(m, SparseF2Matrix):
        m = SparseF2Matrix.from_dense(m)
    pivots: dict[int, int] = {}
    for i in range(m.n_rows):
        v = 0
        for j in m.row(i).tolist():
            v ^= 1 << j
        while v:
            low = (v & -v).bit_length() - 1
            p = pivots.get(low)
            if p is None:
                pivots[low] = v
                break
            v ^= p
    return len(pivots)


def rank_f2_dense(a: np.ndarray) -> int:
    """Rank over F2 of a dense 0/1 array by plain row reduction (numpy)."""
    a = (np.asarray(a, dtype=np.uint8) % 2).astype(bool)
    n_rows, n_cols = a.shape
    rank = 0
    for col in range(n_cols):
        if rank == n_rows:
            break
        hits = np.nonzero(a[rank:, col])[0]
        if not len(hits):
            continue
        p = rank + hits[0]
        if p != rank:
            a[[rank, p]] = a[[p, rank]]
        below = np.nonzero(a[:, col])[0]
        below = below[below != rank]
        a[below] ^= a[rank]
        rank += 1
    return rank
