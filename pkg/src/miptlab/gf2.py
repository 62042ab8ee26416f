"""Bit-packed linear algebra over GF(2).

Rows are packed into 64-bit words so that rank computation runs at
word granularity; this is the entanglement kernel of the whole package
(entropy of a region = rank of the biadjacency block between the region
and its complement).
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np
from numba import njit

__all__ = ["BitMatrix", "gf2_rank", "biadjacency", "pack_rows", "rank_words"]


def _n_words(cols: int) -> int:
    return max(1, (cols + 63) >> 6)


class BitMatrix:
    """Dense binary matrix with rows packed into uint64 words.

    Invariant: bits at column index >= cols are zero in every row.
    """

    __slots__ = ("rows", "cols", "words")

    def __init__(self, rows: int, cols: int, words: np.ndarray | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("rows and cols must be nonnegative")
        self.rows = rows
        self.cols = cols
        if words is None:
            words = np.zeros((rows, _n_words(cols)), dtype=np.uint64)
        else:
            words = np.ascontiguousarray(words, dtype=np.uint64)
            if words.shape != (rows, _n_words(cols)):
                raise ValueError("word buffer shape mismatch")
        self.words = words

    @classmethod
    def from_dense(cls, array) -> "BitMatrix":
        a = np.asarray(array, dtype=np.uint8) & 1
        if a.ndim != 2:
            raise ValueError("expected a 2-d array")
        rows, cols = a.shape
        m = cls(rows, cols)
        for j in range(cols):
            w, b = j >> 6, np.uint64(j & 63)
            m.words[:, w] |= a[:, j].astype(np.uint64) << b
        return m

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=np.uint8)
        for j in range(self.cols):
            w, b = j >> 6, np.uint64(j & 63)
            out[:, j] = (self.words[:, w] >> b) & np.uint64(1)
        return out

    def get(self, i: int, j: int) -> int:
        return int((self.words[i, j >> 6] >> np.uint64(j & 63)) & np.uint64(1))

    def set(self, i: int, j: int, value: int = 1) -> None:
        w, b = j >> 6, np.uint64(j & 63)
        if value:
            self.words[i, w] |= np.uint64(1) << b
        else:
            self.words[i, w] &= ~(np.uint64(1) << b)

    def rank(self) -> int:
        return gf2_rank(self)

    def __repr__(self) -> str:  # pragma: no cover
        return f"BitMatrix({self.rows}x{self.cols})"


@njit(cache=True)
def rank_words(words, nrows, ncols):
    """In-place row reduction over packed words; returns the GF(2) rank.

    Pivot per column is the first row with that bit set; elimination
    XORs whole word rows. ``words`` is destroyed.
    """
    r = 0
    nw = words.shape[1]
    for col in range(ncols):
        w = col >> 6
        bit = np.uint64(1) << np.uint64(col & 63)
        pivot = -1
        for i in range(r, nrows):
            if words[i, w] & bit:
                pivot = i
                break
        if pivot < 0:
            continue
        if pivot != r:
            for k in range(nw):
                tmp = words[r, k]
                words[r, k] = words[pivot, k]
                words[pivot, k] = tmp
        for i in range(pivot + 1, nrows):
            if words[i, w] & bit:
                for k in range(nw):
                    words[i, k] ^= words[r, k]
        r += 1
        if r == nrows:
            break
    return r


def gf2_rank(m: BitMatrix) -> int:
    """GF(2) rank of a BitMatrix. Pure function; the input is not modified."""
    if m.rows == 0 or m.cols == 0:
        return 0
    return int(rank_words(m.words.copy(), m.rows, m.cols))


@njit(cache=True)
def _extract_block(adj, rows_idx, cols_idx, out):
    """Pack adj[rows_idx][:, cols_idx] (adj itself packed) into ``out``."""
    for i in range(rows_idx.shape[0]):
        ri = rows_idx[i]
        for j in range(cols_idx.shape[0]):
            cj = cols_idx[j]
            if (adj[ri, cj >> 6] >> np.uint64(cj & 63)) & np.uint64(1):
                out[i, j >> 6] |= np.uint64(1) << np.uint64(j & 63)


def pack_rows(neighbor_sets: Sequence[Iterable[int]], n: int | None = None) -> np.ndarray:
    """Pack per-vertex neighbor sets into a (n, words) uint64 adjacency."""
    if n is None:
        n = len(neighbor_sets)
    adj = np.zeros((n, _n_words(n)), dtype=np.uint64)
    for i, nbrs in enumerate(neighbor_sets):
        for j in nbrs:
            if j == i:
                raise ValueError("self-loop in neighbor sets")
            adj[i, j >> 6] |= np.uint64(1) << np.uint64(j & 63)
    return adj


def biadjacency(adjacency, region_a: Iterable[int], region_b: Iterable[int]) -> BitMatrix:
    """Biadjacency block: entry (i, j) = 1 iff edge between the i-th site of
    region_a and the j-th site of region_b. Row/column order follows the
    iteration order of the regions.

    ``adjacency`` is either a packed (n, words) uint64 array or a sequence of
    per-vertex neighbor iterables.
    """
    a_idx = np.asarray(list(region_a), dtype=np.int64)
    b_idx = np.asarray(list(region_b), dtype=np.int64)
    if len(set(a_idx.tolist()) & set(b_idx.tolist())) > 0:
        raise ValueError("regions overlap")
    if isinstance(adjacency, np.ndarray) and adjacency.dtype == np.uint64:
        adj = adjacency
    else:
        adj = pack_rows(adjacency)
    m = BitMatrix(len(a_idx), len(b_idx))
    if len(a_idx) and len(b_idx):
        _extract_block(adj, a_idx, b_idx, m.words)
    return m
