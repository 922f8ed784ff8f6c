"""GF(2) chain complexes generated by rest points and closed-orbit copies.

Degree k is spanned by the rest points of index k together with one copy of
every closed orbit of index k (written ``gamma-``) and one copy of every
closed orbit of index k-1 (written ``gamma+``).  The boundary coefficient
between two basis elements is the mod-2 connection count of their originating
critical elements, and 0 when both copies come from the same orbit.

The composed boundary need not vanish: ``check_d2`` hunts for the witnesses,
and ``betti`` refuses to compute homology while any exist.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .flowdata import FlowSystem, Violation, validate
from .gf2 import MatrixGF2, multiply, rank

PLAIN = "plain"
MINUS = "minus"
PLUS = "plus"

_SUFFIX = {PLAIN: "", MINUS: "-", PLUS: "+"}


@dataclass(frozen=True)
class BasisElement:
    """One generator: a rest point, or the lower/upper copy of an orbit."""

    origin: str
    flavor: str  # PLAIN, MINUS or PLUS
    degree: int

    def __post_init__(self):
        if self.flavor not in _SUFFIX:
            raise ValueError(f"invalid flavor {self.flavor!r}")

    @property
    def label(self) -> str:
        """Display name: origin with a +/- suffix for orbit copies."""
        return self.origin + _SUFFIX[self.flavor]


@dataclass(frozen=True)
class ChainComplexGF2:
    """Graded ordered bases plus boundary matrices.

    ``boundary(k)`` maps degree k to degree k-1: rows are indexed by the
    degree-(k-1) basis, columns by the degree-k basis.  The degree-0 boundary
    is the empty matrix with zero rows.
    """

    top_degree: int
    bases: tuple[tuple[BasisElement, ...], ...]
    boundaries: tuple[MatrixGF2, ...]

    def basis(self, k: int) -> tuple[BasisElement, ...]:
        if 0 <= k <= self.top_degree:
            return self.bases[k]
        return ()

    def boundary(self, k: int) -> MatrixGF2:
        if 1 <= k <= self.top_degree:
            return self.boundaries[k]
        if k == 0:
            return self.boundaries[0]
        # Outside the graded range every boundary is an empty zero map.
        cols = len(self.basis(k))
        rows = len(self.basis(k - 1))
        return MatrixGF2.zeros(rows, cols)


@dataclass(frozen=True)
class D2Violation:
    """A nonzero entry of a composed boundary: d_{k-1} . d_k applied to
    ``source`` (degree k) hits ``target`` (degree k-2)."""

    degree: int
    source: BasisElement
    target: BasisElement

    def __str__(self) -> str:
        return f"d{self.degree - 1}.d{self.degree} != 0 at column {self.source.label}, row {self.target.label}"


class InvalidSystemError(ValueError):
    """Raised when a complex is requested for a system that fails validation."""

    def __init__(self, violations: list[Violation]):
        super().__init__("system fails validation: " + "; ".join(str(v) for v in violations))
        self.violations = violations


class D2Error(Exception):
    """Raised when homology is requested but the boundary does not square to zero."""

    def __init__(self, violations: list[D2Violation]):
        super().__init__("differential does not square to zero: " + "; ".join(str(v) for v in violations))
        self.violations = violations


def build_complex(s: FlowSystem) -> ChainComplexGF2:
    """Assemble the chain complex of a valid system.

    Basis order in each degree: rest points first, then lower orbit copies,
    then upper orbit copies, each group in declaration order — so matrices
    are reproducible byte for byte.
    """
    violations = validate(s)
    if violations:
        raise InvalidSystemError(violations)

    n = s.dimension
    bases: list[tuple[BasisElement, ...]] = []
    for k in range(n + 1):
        level = [BasisElement(e.name, PLAIN, k) for e in s.elements if e.is_rest and e.index == k]
        level += [BasisElement(e.name, MINUS, k) for e in s.elements if e.is_orbit and e.index == k]
        level += [BasisElement(e.name, PLUS, k) for e in s.elements if e.is_orbit and e.index == k - 1]
        bases.append(tuple(level))

    boundaries: list[MatrixGF2] = [MatrixGF2.zeros(0, len(bases[0]))]
    for k in range(1, n + 1):
        rows, cols = bases[k - 1], bases[k]
        mat = np.zeros((len(rows), len(cols)), dtype=np.uint8)
        for j, col in enumerate(cols):
            for i, row in enumerate(rows):
                if col.origin == row.origin:
                    continue  # both copies of one orbit: coefficient 0
                mat[i, j] = s.connections.parity(col.origin, row.origin)
        boundaries.append(MatrixGF2(mat))

    return ChainComplexGF2(top_degree=n, bases=tuple(bases), boundaries=tuple(boundaries))


def check_d2(c: ChainComplexGF2) -> list[D2Violation]:
    """All witnesses that the composed boundary is nonzero, in degree order."""
    violations: list[D2Violation] = []
    for k in range(2, c.top_degree + 1):
        product = multiply(c.boundary(k - 1), c.boundary(k))
        for i, j in product.nonzero_entries():
            violations.append(D2Violation(degree=k, source=c.basis(k)[j], target=c.basis(k - 2)[i]))
    return violations


def betti(c: ChainComplexGF2) -> list[int]:
    """GF(2) Betti numbers b_0..b_n; refuses (raises D2Error) when d^2 != 0."""
    violations = check_d2(c)
    if violations:
        raise D2Error(violations)
    numbers = []
    for k in range(c.top_degree + 1):
        rank_in = rank(c.boundary(k + 1)) if k < c.top_degree else 0
        numbers.append(len(c.basis(k)) - rank(c.boundary(k)) - rank_in)
    return numbers


def euler_characteristic(c: ChainComplexGF2) -> int:
    """Alternating sum of basis sizes.  Each orbit lands in two consecutive
    degrees and cancels, so this equals the alternating rest-point count."""
    return sum((-1) ** k * len(c.basis(k)) for k in range(c.top_degree + 1))


@dataclass(frozen=True)
class DiffCell:
    """One boundary-matrix entry that differs between two complexes,
    addressed in the first complex's basis."""

    degree: int
    row: BasisElement
    col: BasisElement
    left: int
    right: int


@dataclass(frozen=True)
class MatrixDiff:
    """Where two complexes disagree under a basis correspondence."""

    cells: tuple[DiffCell, ...]

    def is_empty(self) -> bool:
        return not self.cells

    def degrees(self) -> tuple[int, ...]:
        return tuple(sorted({cell.degree for cell in self.cells}))


def compare_matrices(
    a: ChainComplexGF2,
    b: ChainComplexGF2,
    correspondence: Mapping[BasisElement, BasisElement],
) -> MatrixDiff:
    """Entry-by-entry comparison of boundary matrices under a
    degree-preserving basis bijection from a to b."""
    if a.top_degree != b.top_degree:
        raise ValueError(f"top degrees differ: {a.top_degree} vs {b.top_degree}")

    for x, y in correspondence.items():
        if x.degree != y.degree:
            raise ValueError(f"correspondence is not degree-preserving: {x.label} (degree {x.degree}) -> {y.label} (degree {y.degree})")

    for k in range(a.top_degree + 1):
        left, right = a.basis(k), b.basis(k)
        if len(left) != len(right):
            raise ValueError(f"basis sizes differ in degree {k}: {len(left)} vs {len(right)}")
        images = [correspondence.get(x) for x in left]
        if any(y is None for y in images):
            missing = [x.label for x, y in zip(left, images) if y is None]
            raise ValueError(f"correspondence misses basis element(s) {missing} in degree {k}")
        if set(images) != set(right):
            raise ValueError(f"correspondence is not a bijection onto the second basis in degree {k}")

    cells: list[DiffCell] = []
    for k in range(1, a.top_degree + 1):
        rows_a, cols_a = a.basis(k - 1), a.basis(k)
        row_pos_b = {elem: i for i, elem in enumerate(b.basis(k - 1))}
        col_pos_b = {elem: j for j, elem in enumerate(b.basis(k))}
        mat_a, mat_b = a.boundary(k), b.boundary(k)
        for i, row in enumerate(rows_a):
            for j, col in enumerate(cols_a):
                left = mat_a[i, j]
                right = mat_b[row_pos_b[correspondence[row]], col_pos_b[correspondence[col]]]
                if left != right:
                    cells.append(DiffCell(degree=k, row=row, col=col, left=left, right=right))
    return MatrixDiff(cells=tuple(cells))
