"""Dense linear algebra over the two-element field GF(2).

Matrices are stored as numpy uint8 arrays with entries in {0, 1} and all
arithmetic is exact (XOR row operations, products reduced mod 2).  No
floating point is involved anywhere.  Empty matrices (zero rows or zero
columns) are legal and have rank 0.
"""

from __future__ import annotations

import numpy as np


class MatrixGF2:
    """An immutable 0/1 matrix over GF(2).

    Accepts any nested-sequence or ndarray of 0/1 entries.  Use
    ``zeros``/``identity`` for the common constructors.
    """

    __slots__ = ("_data",)

    def __init__(self, data):
        arr = np.asarray(data)
        if arr.size == 0 and arr.ndim <= 2:
            # An empty row list cannot carry a column count; normalize to the
            # declared shape when 2-d, to 0 x 0 otherwise.
            shape = arr.shape if arr.ndim == 2 else (0, 0)
            arr = np.zeros(shape, dtype=np.uint8)
        else:
            if arr.ndim != 2:
                raise ValueError(f"matrix data must be two-dimensional, got ndim={arr.ndim}")
            if not (np.issubdtype(arr.dtype, np.integer) or arr.dtype == np.bool_):
                raise ValueError(f"matrix entries must be integer 0 or 1, got dtype {arr.dtype}")
            if arr.min() < 0 or arr.max() > 1:
                raise ValueError("matrix entries must be 0 or 1")
            arr = arr.astype(np.uint8)
        arr.setflags(write=False)
        self._data = arr

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "MatrixGF2":
        if rows < 0 or cols < 0:
            raise ValueError(f"dimensions must be non-negative, got {rows} x {cols}")
        return cls(np.zeros((rows, cols), dtype=np.uint8))

    @classmethod
    def identity(cls, n: int) -> "MatrixGF2":
        return cls(np.eye(n, dtype=np.uint8))

    @property
    def rows(self) -> int:
        return self._data.shape[0]

    @property
    def cols(self) -> int:
        return self._data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._data.shape

    def __getitem__(self, key) -> int:
        return int(self._data[key])

    def tolist(self) -> list[list[int]]:
        return [[int(v) for v in row] for row in self._data]

    def array(self) -> np.ndarray:
        """A writable uint8 copy of the entries."""
        return self._data.copy()

    def is_zero(self) -> bool:
        return not self._data.any()

    def nonzero_entries(self) -> list[tuple[int, int]]:
        """(row, col) positions of the 1-entries, in row-major order."""
        rr, cc = np.nonzero(self._data)
        return list(zip(rr.tolist(), cc.tolist()))

    def __eq__(self, other) -> bool:
        if not isinstance(other, MatrixGF2):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._data, other._data))

    def __hash__(self):
        return hash((self.shape, self._data.tobytes()))

    def __repr__(self) -> str:
        return f"MatrixGF2({self.tolist()!r})"


def multiply(a: MatrixGF2, b: MatrixGF2) -> MatrixGF2:
    """Matrix product over GF(2)."""
    if a.cols != b.rows:
        raise ValueError(f"dimension mismatch: cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    # Integer product cannot overflow uint8 at the sizes this library handles,
    # so accumulate in a wider dtype before reducing mod 2.
    prod = (a.array().astype(np.int64) @ b.array().astype(np.int64)) % 2
    return MatrixGF2(prod.astype(np.uint8))


def row_reduce(m: MatrixGF2) -> tuple[MatrixGF2, tuple[int, ...]]:
    """Reduced row-echelon form and pivot columns, via XOR elimination."""
    mat = m.array().copy()
    nrows, ncols = mat.shape
    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        if row == nrows:
            break
        pivot = None
        for r in range(row, nrows):
            if mat[r, col]:
                pivot = r
                break
        if pivot is None:
            continue
        if pivot != row:
            mat[[row, pivot]] = mat[[pivot, row]]
        for r in range(nrows):
            if r != row and mat[r, col]:
                mat[r, :] ^= mat[row, :]
        pivots.append(col)
        row += 1
    return MatrixGF2(mat), tuple(pivots)


def rref(m: MatrixGF2) -> MatrixGF2:
    """Reduced row-echelon form of ``m``."""
    reduced, _ = row_reduce(m)
    return reduced


def rank(m: MatrixGF2) -> int:
    """Rank of ``m`` over GF(2)."""
    _, pivots = row_reduce(m)
    return len(pivots)


def kernel_dim(m: MatrixGF2) -> int:
    """Dimension of the null space of ``m`` over GF(2)."""
    return m.cols - rank(m)
