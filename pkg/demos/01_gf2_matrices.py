"""Exact arithmetic over the two-element field.

Boundary matrices in this package live over GF(2): entries are 0 or 1,
addition is XOR, and there is no floating point anywhere.  This walk-through
shows the handful of operations everything else is built on.
"""

from msflow import MatrixGF2, kernel_dim, multiply, rank, rref

a = MatrixGF2([[0, 0, 0], [0, 1, 1], [1, 1, 1]])
b = MatrixGF2([[1, 1], [1, 1], [1, 1]])

print("a =")
print(a.tolist())
print("b =")
print(b.tolist())

# 1 + 1 = 0, so rows of ones mostly cancel.
print("a @ b over GF(2):", multiply(a, b).tolist())

m = MatrixGF2([[1, 0, 1], [1, 0, 1], [0, 1, 1], [0, 1, 1]])
print("rank of the 4x3 example:", rank(m))
print("kernel dimension (cols - rank):", kernel_dim(m))
print("reduced row echelon form:", rref(m).tolist())

# Rank over GF(2) has a brute-force meaning: the row span is a vector space,
# so its size is a power of two and rank = log2(size).
span = {(0, 0, 0)}
for i in range(m.rows):
    row = tuple(int(m[i, j]) for j in range(m.cols))
    span |= {tuple(x ^ y for x, y in zip(v, row)) for v in span}
print("row span size:", len(span), "-> log2 =", len(span).bit_length() - 1)

# Empty matrices are legal; they show up as the degree-0 boundary.
print("rank of a 0x4 matrix:", rank(MatrixGF2.zeros(0, 4)))
