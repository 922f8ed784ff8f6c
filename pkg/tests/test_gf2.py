"""Exact GF(2) matrix arithmetic: construction, product, rank, rref, kernel.

The rank tests lean on an independent oracle: the row span of a GF(2) matrix
is a vector space, so its cardinality is 2^rank, and the span can be built by
brute-force XOR closure without any row reduction.
"""

import itertools
import random

import numpy as np
import pytest

from msflow import MatrixGF2, kernel_dim, multiply, rank, rref
from msflow.gf2 import row_reduce


def span_rank(m: MatrixGF2) -> int:
    """Rank via the cardinality of the XOR closure of the rows."""
    zero = (0,) * m.cols
    span = {zero}
    for i in range(m.rows):
        row = tuple(int(m[i, j]) for j in range(m.cols))
        span |= {tuple(a ^ b for a, b in zip(v, row)) for v in span}
    size = len(span)
    assert size & (size - 1) == 0, "row span size must be a power of two"
    return size.bit_length() - 1


def random_matrix(rng: random.Random, rows: int, cols: int) -> MatrixGF2:
    if rows == 0 or cols == 0:
        return MatrixGF2.zeros(rows, cols)
    return MatrixGF2([[rng.randint(0, 1) for _ in range(cols)] for _ in range(rows)])


# ---------------------------------------------------------------------------
# construction


def test_entries_and_shape():
    m = MatrixGF2([[1, 0], [0, 1], [1, 1]])
    assert m.shape == (3, 2)
    assert m.rows == 3 and m.cols == 2
    assert m[2, 0] == 1 and m[0, 1] == 0
    assert m.tolist() == [[1, 0], [0, 1], [1, 1]]


def test_rejects_non_bit_entries():
    with pytest.raises(ValueError):
        MatrixGF2([[0, 2]])
    with pytest.raises(ValueError):
        MatrixGF2(np.array([[0.5]]))


def test_empty_matrices_are_valid_with_rank_zero():
    for shape in [(0, 0), (0, 4), (4, 0)]:
        m = MatrixGF2.zeros(*shape)
        assert m.shape == shape
        assert rank(m) == 0


def test_equality_and_hash():
    a = MatrixGF2([[1, 0], [1, 1]])
    b = MatrixGF2(np.array([[1, 0], [1, 1]], dtype=np.uint8))
    c = MatrixGF2([[1, 0], [0, 1]])
    assert a == b and hash(a) == hash(b)
    assert a != c
    assert a != [[1, 0], [1, 1]]


def test_values_are_immutable():
    m = MatrixGF2([[1, 0], [0, 1]])
    arr = m.array()
    arr[0, 0] = 0  # mutating the copy must not touch the matrix
    assert m[0, 0] == 1
    with pytest.raises((ValueError, TypeError)):
        m._data[0, 0] = 0  # the backing array itself is locked


# ---------------------------------------------------------------------------
# multiply


def test_multiply_hand_checked_product():
    a = MatrixGF2([[0, 0, 0], [0, 1, 1], [1, 1, 1]])
    b = MatrixGF2([[1, 1], [1, 1], [1, 1]])
    assert multiply(a, b).tolist() == [[0, 0], [0, 0], [1, 1]]


def test_multiply_identity_is_neutral():
    rng = random.Random(7)
    m = random_matrix(rng, 3, 3)
    assert multiply(MatrixGF2.identity(3), m) == m
    assert multiply(m, MatrixGF2.identity(3)) == m


def test_multiply_ones_cancel_mod_2():
    a = MatrixGF2([[1, 1], [1, 1]])
    b = MatrixGF2([[1], [1]])
    assert multiply(a, b).tolist() == [[0], [0]]


def test_multiply_shape_mismatch_names_both_shapes():
    a = MatrixGF2.zeros(2, 3)
    b = MatrixGF2.zeros(4, 2)
    with pytest.raises(ValueError) as exc:
        multiply(a, b)
    assert "2x3" in str(exc.value) and "4x2" in str(exc.value)


def test_multiply_with_empty_inner_dimension_is_zero():
    a = MatrixGF2.zeros(2, 0)
    b = MatrixGF2.zeros(0, 3)
    assert multiply(a, b) == MatrixGF2.zeros(2, 3)


def test_multiply_is_associative_on_random_triples():
    rng = random.Random(2024)
    for _ in range(50):
        p, q, r, s = (rng.randint(0, 4) for _ in range(4))
        a, b, c = random_matrix(rng, p, q), random_matrix(rng, q, r), random_matrix(rng, r, s)
        assert multiply(multiply(a, b), c) == multiply(a, multiply(b, c))


# ---------------------------------------------------------------------------
# rank / rref / kernel_dim


def test_rank_of_four_by_three_boundary_is_two():
    m = MatrixGF2([[1, 0, 1], [1, 0, 1], [0, 1, 1], [0, 1, 1]])
    assert rank(m) == 2


@pytest.mark.parametrize("shape", [(1, 1), (3, 2), (2, 5), (4, 4)])
def test_rank_of_zero_matrix_is_zero(shape):
    assert rank(MatrixGF2.zeros(*shape)) == 0


def test_rank_of_repeated_rows_is_one():
    m = MatrixGF2([[1, 1], [1, 1], [1, 1]])
    assert rank(m) == 1
    assert span_rank(m) == 1


def test_rref_examples():
    assert rref(MatrixGF2([[1, 1], [1, 1]])).tolist() == [[1, 1], [0, 0]]
    assert rref(MatrixGF2.identity(3)) == MatrixGF2.identity(3)
    assert rref(MatrixGF2([[0, 1], [1, 0]])) == MatrixGF2.identity(2)


def test_rref_preserves_rank_and_is_idempotent():
    rng = random.Random(5)
    for _ in range(40):
        m = random_matrix(rng, rng.randint(0, 5), rng.randint(0, 5))
        r = rref(m)
        assert rank(r) == rank(m)
        assert rref(r) == r


def test_row_reduce_reports_pivot_columns():
    m = MatrixGF2([[0, 1, 1], [0, 1, 0], [0, 0, 1]])
    reduced, pivots = row_reduce(m)
    assert pivots == (1, 2)
    assert rank(m) == len(pivots)
    assert reduced.tolist() == [[0, 1, 0], [0, 0, 1], [0, 0, 0]]


def test_kernel_dim_examples():
    assert kernel_dim(MatrixGF2([[1, 0, 1], [1, 0, 1], [0, 1, 1], [0, 1, 1]])) == 1
    assert kernel_dim(MatrixGF2.zeros(3, 5)) == 5
    assert kernel_dim(MatrixGF2.identity(4)) == 0


# ---------------------------------------------------------------------------
# oracle equivalence and rank inequalities


def test_rank_matches_span_oracle_exhaustively_on_small_shapes():
    """Every bit pattern on every shape with at most 12 entries."""
    for rows in range(0, 5):
        for cols in range(0, 5):
            cells = rows * cols
            if cells > 12:
                continue
            for bits in range(2**cells):
                flat = [(bits >> i) & 1 for i in range(cells)]
                m = MatrixGF2([flat[r * cols : (r + 1) * cols] for r in range(rows)])
                assert rank(m) == span_rank(m)


def test_rank_matches_span_oracle_sampled_on_larger_shapes():
    """Seeded samples on every shape up to 5x5 too big to enumerate."""
    rng = random.Random(20240917)
    for rows in range(1, 6):
        for cols in range(1, 6):
            if rows * cols <= 12:
                continue
            for _ in range(120):
                m = random_matrix(rng, rows, cols)
                assert rank(m) == span_rank(m)


def test_rank_bounds():
    rng = random.Random(99)
    for _ in range(60):
        m = random_matrix(rng, rng.randint(0, 5), rng.randint(0, 5))
        assert rank(m) <= min(m.rows, m.cols)


def test_rank_of_product_bounded_by_factor_ranks():
    rng = random.Random(1234)
    for _ in range(60):
        p, q, r = rng.randint(0, 5), rng.randint(0, 5), rng.randint(0, 5)
        a, b = random_matrix(rng, p, q), random_matrix(rng, q, r)
        assert rank(multiply(a, b)) <= min(rank(a), rank(b))
