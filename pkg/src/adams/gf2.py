"""Bit-packed linear algebra over GF(2) and scalar arithmetic mod 4."""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

_WORD = 64


class GF2Matrix:
    """Matrix over GF(2) with rows stored as packed 64-bit words."""

    __slots__ = ("rows", "cols", "words")

    def __init__(self, rows: int, cols: int, words: Optional[np.ndarray] = None):
        self.rows = rows
        self.cols = cols
        nwords = (cols + _WORD - 1) // _WORD if cols else 0
        if words is None:
            words = np.zeros((rows, max(nwords, 1)), dtype=np.uint64)
        self.words = words

    @classmethod
    def from_rows(cls, row_bits: Sequence[int], cols: int) -> "GF2Matrix":
        """Build from rows given as Python integers (bit j = column j)."""
        m = cls(len(row_bits), cols)
        nwords = m.words.shape[1]
        mask = (1 << _WORD) - 1
        for i, bits in enumerate(row_bits):
            w = 0
            while bits:
                m.words[i, w] = np.uint64(bits & mask)
                bits >>= _WORD
                w += 1
                if w >= nwords and bits:
                    raise ValueError("row wider than column count")
        return m

    @classmethod
    def from_dense(cls, entries: Sequence[Sequence[int]], cols: Optional[int] = None) -> "GF2Matrix":
        rows = len(entries)
        if cols is None:
            cols = len(entries[0]) if rows else 0
        m = cls(rows, cols)
        for i, row in enumerate(entries):
            for j, v in enumerate(row):
                if v & 1:
                    m.set(i, j)
        return m

    def copy(self) -> "GF2Matrix":
        return GF2Matrix(self.rows, self.cols, self.words.copy())

    def set(self, i: int, j: int) -> None:
        self.words[i, j // _WORD] |= np.uint64(1 << (j % _WORD))

    def get(self, i: int, j: int) -> int:
        return int(self.words[i, j // _WORD] >> np.uint64(j % _WORD)) & 1

    def row_bits(self, i: int) -> int:
        out = 0
        for w in range(self.words.shape[1] - 1, -1, -1):
            out = (out << _WORD) | int(self.words[i, w])
        return out

    def mul_vec(self, x: Sequence[int]) -> List[int]:
        """Matrix-vector product over GF(2); x given as 0/1 entries."""
        xb = 0
        for j, v in enumerate(x):
            if v & 1:
                xb |= 1 << j
        out = []
        for i in range(self.rows):
            out.append(bin(self.row_bits(i) & xb).count("1") & 1)
        return out


@dataclass(frozen=True)
class RrefResult:
    matrix: GF2Matrix
    pivots: Tuple[int, ...]
    rank: int


def rref(m: GF2Matrix) -> RrefResult:
    """Reduced row echelon form with lowest-column pivots."""
    a = m.copy()
    pivots: List[int] = []
    row = 0
    for col in range(a.cols):
        w, b = col // _WORD, np.uint64(1 << (col % _WORD))
        pivot = -1
        for r in range(row, a.rows):
            if a.words[r, w] & b:
                pivot = r
                break
        if pivot < 0:
            continue
        if pivot != row:
            a.words[[row, pivot]] = a.words[[pivot, row]]
        hit = (a.words[:, w] & b).astype(bool)
        hit[row] = False
        if hit.any():
            a.words[hit] ^= a.words[row]
        pivots.append(col)
        row += 1
        if row == a.rows:
            break
    return RrefResult(a, tuple(pivots), len(pivots))


def solve(m: GF2Matrix, b: Sequence[int]) -> Optional[List[int]]:
    """Solve m·x = b; free variables are set to 0; None if inconsistent."""
    if len(b) != m.rows:
        raise ValueError("dimension mismatch")
    aug = GF2Matrix(m.rows, m.cols + 1)
    aug.words[:, : m.words.shape[1]] = m.words
    for i, v in enumerate(b):
        if v & 1:
            aug.set(i, m.cols)
    red = rref(aug)
    x = [0] * m.cols
    for r, col in enumerate(red.pivots):
        if col == m.cols:
            return None
        x[col] = red.matrix.get(r, m.cols)
    return x


def kernel_basis(m: GF2Matrix) -> List[List[int]]:
    """Basis of the nullspace, one vector per free column, ascending."""
    red = rref(m)
    pivot_set = set(red.pivots)
    basis = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        vec = [0] * m.cols
        vec[free] = 1
        for r, col in enumerate(red.pivots):
            if red.matrix.get(r, free):
                vec[col] = 1
        basis.append(vec)
    return basis


def z4(value: int) -> int:
    """Normalize a scalar to the ring of integers mod 4."""
    return value & 3
