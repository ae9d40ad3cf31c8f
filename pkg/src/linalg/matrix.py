"""Dense matrices with generic entries and elimination delegated to a ScalarField.

Mat keeps its shape explicitly so 0×n and n×0 matrices (zero spaces in an
exact sequence) behave. Entries are whatever the field uses: Fraction, int
or mpmath mpc.

Elimination helpers:
    rref(field, m)                 - reduced row echelon form and pivot columns
    rank(field, m)
    kernel_basis(field, m)         - one vector per free column, as matrix columns
    image_basis(field, m)          - pivot columns of m
    complement_basis(field, m)     - standard vectors completing the column span
    solve(field, a, b)             - x with a·x = b, NotExactError if inconsistent
    inverse(field, m)
    determinant(field, m)
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Any, Iterable, Sequence

from src.errors import NotExactError
from src.linalg.scalars import ScalarField


@dataclass(frozen=True)
class Mat:
    nrows: int
    ncols: int
    rows: tuple[tuple[Any, ...], ...]

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[Any]], ncols: int | None = None) -> "Mat":
        rows = tuple(tuple(r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("column count required for a matrix with no rows")
            ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix rows")
        return cls(len(rows), ncols, rows)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[Any]], nrows: int) -> "Mat":
        return cls.from_rows(
            [[col[i] for col in columns] for i in range(nrows)], ncols=len(columns)
        )

    @classmethod
    def zeros(cls, nrows: int, ncols: int, zero: Any = 0) -> "Mat":
        return cls(nrows, ncols, tuple(tuple(zero for _ in range(ncols)) for _ in range(nrows)))

    @classmethod
    def identity(cls, n: int, one: Any = 1, zero: Any = 0) -> "Mat":
        return cls(n, n, tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)))

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij: tuple[int, int]) -> Any:
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> list[Any]:
        return [row[j] for row in self.rows]

    def columns(self) -> list[list[Any]]:
        return [self.column(j) for j in range(self.ncols)]

    def transpose(self) -> "Mat":
        return Mat.from_rows([self.column(j) for j in range(self.ncols)], ncols=self.nrows)

    def map(self, fn) -> "Mat":
        return Mat(self.nrows, self.ncols, tuple(tuple(fn(x) for x in row) for row in self.rows))

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = other.columns()
        out = []
        for row in self.rows:
            out.append([_dot(row, col) for col in cols])
        return Mat.from_rows(out, ncols=other.ncols)

    def __add__(self, other: "Mat") -> "Mat":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        return Mat(
            self.nrows,
            self.ncols,
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)),
        )

    def __neg__(self) -> "Mat":
        return self.map(lambda x: -x)

    def __sub__(self, other: "Mat") -> "Mat":
        return self + (-other)

    def scale(self, c: Any) -> "Mat":
        return self.map(lambda x: c * x)

    def hstack(self, other: "Mat") -> "Mat":
        if self.nrows != other.nrows:
            raise ValueError("hstack needs equal row counts")
        return Mat(self.nrows, self.ncols + other.ncols, tuple(a + b for a, b in zip(self.rows, other.rows)))

    def vstack(self, other: "Mat") -> "Mat":
        if self.ncols != other.ncols:
            raise ValueError("vstack needs equal column counts")
        return Mat(self.nrows + other.nrows, self.ncols, self.rows + other.rows)

    def select_columns(self, indices: Sequence[int]) -> "Mat":
        return Mat.from_rows([[row[j] for j in indices] for row in self.rows], ncols=len(indices))

    def select_rows(self, indices: Sequence[int]) -> "Mat":
        return Mat.from_rows([self.rows[i] for i in indices], ncols=self.ncols)

    def is_zero(self, field: ScalarField) -> bool:
        return all(field.is_zero(x) for row in self.rows for x in row)


def _dot(a: Sequence[Any], b: Sequence[Any]) -> Any:
    total = 0
    for x, y in zip(a, b):
        if x and y:
            total = total + x * y
    return total


def convert(field: ScalarField, m: Mat) -> Mat:
    return m.map(field.convert)


def rref(field: ScalarField, m: Mat) -> tuple[Mat, list[int]]:
    """Reduced row echelon form of m and its pivot columns."""
    rows, pivots = field.echelon(m.rows, m.ncols)
    return Mat.from_rows(rows, ncols=m.ncols), pivots


def rank(field: ScalarField, m: Mat) -> int:
    return len(rref(field, m)[1])


def kernel_basis(field: ScalarField, m: Mat) -> Mat:
    """Columns spanning ker(m), one per free column of the echelon form."""
    reduced, pivots = rref(field, m)
    free = [c for c in range(m.ncols) if c not in pivots]
    vectors = []
    for f in free:
        v = [field.zero] * m.ncols
        v[f] = field.one
        for row_index, p in enumerate(pivots):
            v[p] = -reduced[row_index, f]
        vectors.append(v)
    return Mat.from_columns(vectors, m.ncols)


def image_basis(field: ScalarField, m: Mat) -> Mat:
    """The pivot columns of m; they form a basis of its column space."""
    _, pivots = rref(field, m)
    return convert(field, m.select_columns(pivots))


def complement_basis(field: ScalarField, m: Mat) -> Mat:
    """Standard basis vectors that complete the columns of m to a basis."""
    n = m.nrows
    augmented = m.hstack(Mat.identity(n))
    _, pivots = rref(field, augmented)
    chosen = [p - m.ncols for p in pivots if p >= m.ncols]
    return convert(field, Mat.identity(n).select_columns(chosen))


def solve(field: ScalarField, a: Mat, b: Mat) -> Mat:
    """A particular solution x of a·x = b (free variables set to zero)."""
    if a.nrows != b.nrows:
        raise ValueError(f"solve shape mismatch {a.shape} vs {b.shape}")
    if a.nrows == a.ncols:
        x = field.solve_square(a.rows, b.rows, b.ncols)
        if x is not None:
            return Mat.from_rows(x, ncols=b.ncols)
    reduced, pivots = rref(field, a.hstack(b))
    if any(p >= a.ncols for p in pivots):
        raise NotExactError("linear system is inconsistent")
    x = [[field.zero] * b.ncols for _ in range(a.ncols)]
    for row_index, p in enumerate(pivots):
        for j in range(b.ncols):
            x[p][j] = reduced[row_index, a.ncols + j]
    return Mat.from_rows(x, ncols=b.ncols)


def inverse(field: ScalarField, m: Mat) -> Mat:
    if m.nrows != m.ncols:
        raise ValueError("inverse of a non-square matrix")
    x = field.solve_square(m.rows, Mat.identity(m.nrows).rows, m.nrows)
    if x is None:
        raise NotExactError("matrix is singular")
    return Mat.from_rows(x, ncols=m.nrows)


def determinant(field: ScalarField, m: Mat) -> Any:
    if m.nrows != m.ncols:
        raise ValueError(f"determinant of a non-square {m.shape} matrix")
    return field.det(m.rows)


def random_unimodular(rng: random.Random, n: int, steps: int = 6, bound: int = 3) -> Mat:
    """A random integer matrix of determinant ±1 built from elementary operations."""
    rows = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    if n < 2:
        return Mat.from_rows(rows, ncols=n)
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        q = rng.randint(-bound, bound)
        rows[i] = [a + q * b for a, b in zip(rows[i], rows[j])]
    if rng.random() < 0.5:
        rows[0] = [-x for x in rows[0]]
    return Mat.from_rows(rows, ncols=n)


def random_invertible(field: ScalarField, rng: random.Random, n: int, bound: int = 5) -> Mat:
    """A random invertible matrix with small integer entries."""
    while True:
        m = Mat.from_rows(
            [[rng.randint(-bound, bound) for _ in range(n)] for _ in range(n)], ncols=n
        ) if n else Mat.zeros(0, 0)
        if n == 0 or not field.is_zero(determinant(field, m)):
            return convert(field, m)
