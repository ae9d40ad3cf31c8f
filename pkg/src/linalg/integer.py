"""Integer matrix normal forms on sympy's DomainMatrix over ZZ.

Smith normal form with unimodular transforms (D = left · A · right), lattice
bases in Hermite normal form, integer kernels and lattice coordinates.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import (
    hermite_normal_form,
    invariant_factors as smith_invariants,
    smith_normal_decomp,
)

from src.linalg.matrix import Mat

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SmithForm:
    diagonal: list[int]  # nonzero diagonal entries, each dividing the next
    left: Mat            # unimodular, rows x rows
    right: Mat           # unimodular, cols x cols

    @property
    def rank(self) -> int:
        return len(self.diagonal)

    @property
    def invariant_factors(self) -> list[int]:
        """Elementary divisors greater than 1."""
        return [d for d in self.diagonal if d > 1]


def _as_int_rows(a: Mat) -> list[list[int]]:
    rows = []
    for row in a.rows:
        converted = []
        for x in row:
            if int(x) != x:
                raise ValueError(f"non-integer entry {x} in integer matrix")
            converted.append(int(x))
        rows.append(converted)
    return rows


def to_domain_matrix(a: Mat) -> DomainMatrix:
    return DomainMatrix([[ZZ(x) for x in row] for row in _as_int_rows(a)], a.shape, ZZ)


def from_domain_matrix(dm: DomainMatrix) -> Mat:
    return Mat.from_rows([[int(x) for x in row] for row in dm.to_list()], ncols=dm.shape[1])


def smith_normal_form(a: Mat) -> SmithForm:
    """Smith normal form with its unimodular transforms."""
    m, n = a.shape
    if not m or not n:
        return SmithForm([], Mat.identity(m), Mat.identity(n))
    smf, left, right = smith_normal_decomp(to_domain_matrix(a))
    entries = smf.to_list()
    diagonal = [int(entries[i][i]) for i in range(min(m, n))]
    diagonal = [d for d in diagonal if d]
    logger.debug("smith form of %dx%d matrix: %s", m, n, diagonal)
    return SmithForm(
        diagonal=diagonal,
        left=from_domain_matrix(left),
        right=from_domain_matrix(right),
    )


def smith_diagonal(a: Mat) -> list[int]:
    """Nonzero Smith diagonal entries, without computing the transforms."""
    if 0 in a.shape:
        return []
    return [int(d) for d in smith_invariants(to_domain_matrix(a)) if d]


def lattice_basis(vectors: Sequence[Sequence[int]], length: int) -> Mat:
    """Canonical basis of the lattice spanned by the vectors, as matrix columns.

    The columns are the Hermite normal form: each column's last nonzero entry
    is a positive pivot, pivot rows increase with the column index, and the
    result depends only on the lattice.
    """
    vectors = [[int(x) for x in v] for v in vectors]
    if not vectors or not length:
        return Mat.zeros(length, 0)
    spanning = Mat.from_columns(vectors, length)
    return from_domain_matrix(hermite_normal_form(to_domain_matrix(spanning)))


def integer_kernel(a: Mat) -> Mat:
    """Canonical ℤ-basis of {x in ℤ^n : a·x = 0}, as matrix columns."""
    snf = smith_normal_form(a)
    kernel_vectors = snf.right.columns()[snf.rank:]
    return lattice_basis(kernel_vectors, a.ncols)


def lattice_coordinates(basis: Mat, v: Sequence[int]) -> Optional[list[int]]:
    """Coordinates of v in a Hermite basis (columns of `basis`), or None if v is not in the lattice."""
    rest = [int(x) for x in v]
    columns = basis.columns()
    pivots = [max(i for i, x in enumerate(col) if x) for col in columns]
    coords = [0] * len(columns)
    for j in sorted(range(len(columns)), key=lambda j: pivots[j], reverse=True):
        col, pivot = columns[j], pivots[j]
        q, rem = divmod(rest[pivot], col[pivot])
        if rem:
            return None
        coords[j] = q
        if q:
            rest = [x - q * y for x, y in zip(rest, col)]
    if any(rest):
        return None
    return coords
