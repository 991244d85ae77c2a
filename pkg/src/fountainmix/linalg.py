"""Matrices and rank machinery over GF(2^m).

Two elimination paths are kept deliberately separate and cross-checked in
the tests: a bit-packed one for GF(2) where a row (or column) lives in a
single Python int, and a table-driven numpy one for every other field.

``RankTracker`` consumes columns one at a time and reports whether each
offer was novel, i.e. increased the rank of the span. That is the inner
loop of every delivery simulation, so it avoids re-elimination: it keeps an
echelon basis keyed by leading index.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .gf import GF2m

__all__ = [
    "MatrixGF",
    "RankTracker",
    "NotDecodableError",
    "InconsistentSystemError",
    "matmul",
    "rank",
    "solve",
]


class NotDecodableError(Exception):
    """Received data does not determine the information vector."""


class InconsistentSystemError(Exception):
    """Received data is not a codeword restriction (corrupt input)."""


class MatrixGF:
    """Immutable dense matrix over a GF(2^m), entries stored as ints."""

    __slots__ = ("field", "values")

    def __init__(self, field: GF2m, values):
        arr = np.asarray(values)
        if arr.ndim != 2:
            raise ValueError(f"expected a 2-d array, got shape {arr.shape}")
        if arr.size and (arr.min() < 0 or arr.max() >= field.order):
            raise ValueError(f"entries out of range for {field!r}")
        self.field = field
        self.values = np.ascontiguousarray(arr, dtype=field._dtype)
        self.values.setflags(write=False)

    @classmethod
    def zeros(cls, field: GF2m, rows: int, cols: int) -> "MatrixGF":
        return cls(field, np.zeros((rows, cols), dtype=field._dtype))

    @classmethod
    def identity(cls, field: GF2m, n: int) -> "MatrixGF":
        return cls(field, np.eye(n, dtype=field._dtype))

    @property
    def rows(self) -> int:
        return self.values.shape[0]

    @property
    def cols(self) -> int:
        return self.values.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def __getitem__(self, idx):
        i, j = idx
        return self.field.element(int(self.values[i, j]))

    def row(self, i: int) -> np.ndarray:
        return self.values[i].copy()

    def column(self, j: int) -> np.ndarray:
        return self.values[:, j].copy()

    def select_columns(self, indices: Sequence[int]) -> "MatrixGF":
        idx = np.asarray(indices, dtype=np.intp)
        if idx.size and (idx.min() < 0 or idx.max() >= self.cols):
            raise ValueError("column index out of range")
        return MatrixGF(self.field, self.values[:, idx])

    def hstack(self, other: "MatrixGF") -> "MatrixGF":
        if other.field != self.field:
            raise ValueError("field mismatch")
        if other.rows != self.rows:
            raise ValueError("row count mismatch")
        return MatrixGF(self.field, np.hstack([self.values, other.values]))

    def transpose(self) -> "MatrixGF":
        return MatrixGF(self.field, self.values.T)

    def left_mul(self, u) -> np.ndarray:
        """Row vector times matrix: returns ``u @ self`` over the field."""
        u = np.asarray(u)
        if u.shape != (self.rows,):
            raise ValueError(f"expected vector of length {self.rows}")
        if self.cols == 0:
            return np.zeros(0, dtype=self.field._dtype)
        return np.bitwise_xor.reduce(
            self.field.mul_array(u[:, None], self.values), axis=0
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MatrixGF)
            and self.field == other.field
            and self.shape == other.shape
            and bool((self.values == other.values).all())
        )

    def __repr__(self) -> str:
        return f"MatrixGF({self.rows}x{self.cols} over {self.field!r})"


def matmul(a: MatrixGF, b: MatrixGF) -> MatrixGF:
    """Matrix product over the common field."""
    if a.field != b.field:
        raise ValueError("field mismatch")
    if a.cols != b.rows:
        raise ValueError(f"inner dimensions differ: {a.cols} vs {b.rows}")
    if a.field.degree == 1 and a.cols < (1 << 24):
        # exact in float32 because counts stay far below 2**24
        prod = (a.values.astype(np.float32) @ b.values.astype(np.float32)) % 2
        return MatrixGF(a.field, prod.astype(np.uint8))
    out = np.zeros((a.rows, b.cols), dtype=a.field._dtype)
    for i in range(a.rows):
        out[i] = b.left_mul(a.values[i])
    return MatrixGF(a.field, out)


# --- bit-packed GF(2) elimination, one int per row ---

def _pack_bits_int(bits: np.ndarray) -> int:
    return int.from_bytes(
        np.packbits(bits.astype(np.uint8), bitorder="little").tobytes(), "little"
    )


def _pack_rows(values: np.ndarray) -> list[int]:
    return [_pack_bits_int(values[i]) for i in range(values.shape[0])]


def _rank_f2_ints(rows: Sequence[int]) -> int:
    basis: dict[int, int] = {}
    for v in rows:
        while v:
            p = v.bit_length() - 1
            if p not in basis:
                basis[p] = v
                break
            v ^= basis[p]
    return len(basis)


def _rref_f2(rows: Sequence[int], pivot_cols: Sequence[int]) -> tuple[list[int], list[int]]:
    """Row-reduce packed rows, scanning pivot candidates in the given order.

    Returns the reduced rows and the pivot columns actually used; row i of
    the result is the pivot row for pivots[i].
    """
    rows = list(rows)
    pivots: list[int] = []
    r = 0
    for c in pivot_cols:
        bit = 1 << c
        pr = next((i for i in range(r, len(rows)) if rows[i] & bit), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i] & bit:
                rows[i] ^= rows[r]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


# --- generic-field elimination ---

def _rref_generic(
    field: GF2m, a: np.ndarray, pivot_cols: Sequence[int]
) -> tuple[np.ndarray, list[int]]:
    a = a.astype(field._dtype).copy()
    nrows = a.shape[0]
    pivots: list[int] = []
    r = 0
    for c in pivot_cols:
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            a[[r, pr]] = a[[pr, r]]
        if a[r, c] != 1:
            a[r] = field.mul_array(a[r], field.inv(int(a[r, c])))
        mask = a[:, c] != 0
        mask[r] = False
        if mask.any():
            a[mask] ^= field.mul_array(a[mask, c][:, None], a[r][None, :])
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return a, pivots


def rank(m: MatrixGF) -> int:
    """Rank of the matrix over its field."""
    if m.field.degree == 1:
        return _rank_f2_ints(_pack_rows(m.values))
    return len(_rref_generic(m.field, m.values, range(m.cols))[1])


def solve(generator_t: MatrixGF, received) -> np.ndarray:
    """Solve ``u @ generator_t == received`` for the information vector u.

    ``generator_t`` is the k x r matrix of the generator columns that were
    actually received, and ``received`` the r observed symbols.

    Raises:
        NotDecodableError: the received columns span less than k dimensions.
        InconsistentSystemError: full rank but no solution exists, meaning
            the received symbols are not consistent with any codeword.
    """
    f = generator_t.field
    k, r = generator_t.shape
    c = np.asarray(received)
    if c.shape != (r,):
        raise ValueError(f"expected {r} received symbols, got shape {c.shape}")
    if c.size and (c.min() < 0 or c.max() >= f.order):
        raise ValueError(f"received symbols out of range for {f!r}")

    if f.degree == 1:
        rows = [
            _pack_bits_int(generator_t.values[:, j]) | (int(c[j]) << k)
            for j in range(r)
        ]
        red, pivots = _rref_f2(rows, range(k))
        nr = len(pivots)
        if nr < k:
            raise NotDecodableError(f"received columns have rank {nr} < {k}")
        if any(red[i] for i in range(nr, r)):
            raise InconsistentSystemError("received symbols match no codeword")
        u = np.zeros(k, dtype=np.uint8)
        for i, p in enumerate(pivots):
            u[p] = (red[i] >> k) & 1
        return u

    aug = np.concatenate(
        [generator_t.values.T, c[:, None].astype(f._dtype)], axis=1
    )
    red, pivots = _rref_generic(f, aug, range(k))
    nr = len(pivots)
    if nr < k:
        raise NotDecodableError(f"received columns have rank {nr} < {k}")
    if np.any(red[nr:, k] != 0):
        raise InconsistentSystemError("received symbols match no codeword")
    u = np.zeros(k, dtype=f._dtype)
    for i, p in enumerate(pivots):
        u[p] = red[i, k]
    return u


class RankTracker:
    """Incremental rank of a growing set of columns in GF(2^m)^dim.

    ``offer_column`` returns True when the column enlarged the span (a
    novel symbol) and False when it was already dependent (redundant).
    """

    def __init__(self, field: GF2m, ambient_dim: int):
        if ambient_dim <= 0:
            raise ValueError("ambient dimension must be positive")
        self.field = field
        self.ambient_dim = ambient_dim
        self._packed = field.degree == 1
        self._basis: dict[int, int | np.ndarray] = {}

    @property
    def current_rank(self) -> int:
        return len(self._basis)

    def full(self) -> bool:
        return len(self._basis) == self.ambient_dim

    def offer_column(self, column) -> bool:
        col = np.asarray(column)
        if col.shape != (self.ambient_dim,):
            raise ValueError(f"expected column of length {self.ambient_dim}")
        if col.size and (col.min() < 0 or col.max() >= self.field.order):
            raise ValueError(f"entries out of range for {self.field!r}")
        if self._packed:
            v = _pack_bits_int(col)
            basis = self._basis
            while v:
                p = v.bit_length() - 1
                if p not in basis:
                    basis[p] = v
                    return True
                v ^= basis[p]
            return False
        f = self.field
        v = col.astype(f._dtype)
        i = 0
        while True:
            nz = np.nonzero(v[i:])[0]
            if nz.size == 0:
                return False
            p = i + int(nz[0])
            if p not in self._basis:
                if v[p] != 1:
                    v = f.mul_array(v, f.inv(int(v[p])))
                self._basis[p] = v
                return True
            # stored basis vectors lead at p, so this zeroes position p
            v = v ^ f.mul_array(int(v[p]), self._basis[p])
            i = p + 1
