"""Scalar fields for the linear algebra layer.

Each field owns its elimination engine, so the same matrix routines run over
exact rationals (sympy DomainMatrix over QQ) and over mpmath complex numbers.

Abstract methods:
    convert(x)              - coerce an input entry into the field
    is_zero(x)              - exact test (rationals) or tolerance test (complex)
    echelon(rows, ncols)    - reduced row echelon form and pivot columns
    det(rows)               - determinant of a square block
    solve_square(a, b)      - a⁻¹·b, or None when a is singular

To add a field: subclass ScalarField and extend get_scalar_field().
"""

from __future__ import annotations

import abc
import logging
from fractions import Fraction
from typing import Any, Optional, Sequence

from mpmath import mp, mpc, mpf
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

logger = logging.getLogger(__name__)

EXACT_RATIONAL = "exact-rational"
HIGH_PRECISION_COMPLEX = "high-precision-complex"

Rows = Sequence[Sequence[Any]]


class ScalarField(abc.ABC):
    kind: str

    @property
    def zero(self) -> Any:
        return self.convert(0)

    @property
    def one(self) -> Any:
        return self.convert(1)

    @abc.abstractmethod
    def convert(self, x: Any) -> Any:
        """Return x as an element of this field."""

    @abc.abstractmethod
    def is_zero(self, x: Any) -> bool:
        """True when x counts as zero."""

    @abc.abstractmethod
    def echelon(self, rows: Rows, ncols: int) -> tuple[list[list[Any]], list[int]]:
        """Reduced row echelon form (same row count) and its pivot columns."""

    @abc.abstractmethod
    def det(self, rows: Rows) -> Any:
        """Determinant of a square block given by its rows."""

    @abc.abstractmethod
    def solve_square(self, a: Rows, b: Rows, ncols: int) -> Optional[list[list[Any]]]:
        """Rows of x with a·x = b for square a; None when a is singular."""


def _to_qq(x: Fraction):
    return QQ(x.numerator, x.denominator)


def _from_qq(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


class RationalField(ScalarField):
    kind = EXACT_RATIONAL

    def convert(self, x: Any) -> Fraction:
        if isinstance(x, Fraction):
            return x
        return Fraction(x)

    def is_zero(self, x: Any) -> bool:
        return x == 0

    def domain_matrix(self, rows: Rows, ncols: int) -> DomainMatrix:
        return DomainMatrix(
            [[_to_qq(self.convert(x)) for x in row] for row in rows], (len(rows), ncols), QQ
        )

    def echelon(self, rows: Rows, ncols: int) -> tuple[list[list[Fraction]], list[int]]:
        if not rows or not ncols:
            return [[self.convert(x) for x in row] for row in rows], []
        reduced, pivots = self.domain_matrix(rows, ncols).rref()
        return [[_from_qq(x) for x in row] for row in reduced.to_list()], list(pivots)

    def det(self, rows: Rows) -> Fraction:
        if not rows:
            return Fraction(1)
        return _from_qq(self.domain_matrix(rows, len(rows)).det())

    def solve_square(self, a: Rows, b: Rows, ncols: int) -> Optional[list[list[Fraction]]]:
        n = len(a)
        if not n:
            return []
        dm = self.domain_matrix(a, n)
        if dm.rank() < n:
            return None
        x = dm.lu_solve(self.domain_matrix(b, ncols))
        return [[_from_qq(v) for v in row] for row in x.to_list()]


class ComplexField(ScalarField):
    kind = HIGH_PRECISION_COMPLEX

    def __init__(self, precision_bits: int = 256, tolerance: Optional[mpf] = None) -> None:
        self.precision_bits = precision_bits
        # entries at or below this magnitude are treated as zero
        self.tolerance = mpf(tolerance) if tolerance is not None else mpf(2) ** (12 - precision_bits // 2)

    def convert(self, x: Any) -> mpc:
        if isinstance(x, Fraction):
            return mpc(mpf(x.numerator) / x.denominator)
        if hasattr(x, "error_bound") and hasattr(x, "value"):
            return mpc(x.value)
        return mpc(x)

    def is_zero(self, x: Any) -> bool:
        return abs(x) <= self.tolerance

    def echelon(self, rows: Rows, ncols: int) -> tuple[list[list[mpc]], list[int]]:
        # mpmath has no rref; partial pivoting on the largest modulus
        work = [[self.convert(x) for x in row] for row in rows]
        nrows = len(work)
        pivots: list[int] = []
        r = 0
        for c in range(ncols):
            if r == nrows:
                break
            candidates = [i for i in range(r, nrows) if not self.is_zero(work[i][c])]
            if not candidates:
                for i in range(r, nrows):
                    work[i][c] = self.zero
                continue
            best = max(candidates, key=lambda i: (abs(work[i][c]), -i))
            work[r], work[best] = work[best], work[r]
            pivot = work[r][c]
            work[r] = [x / pivot for x in work[r]]
            for i in range(nrows):
                if i == r:
                    continue
                if not self.is_zero(work[i][c]):
                    factor = work[i][c]
                    work[i] = [a - factor * b for a, b in zip(work[i], work[r])]
                work[i][c] = self.zero
            pivots.append(c)
            r += 1
        return work, pivots

    def det(self, rows: Rows) -> mpc:
        if not rows:
            return self.one
        return mpc(mp.det(mp.matrix([[self.convert(x) for x in row] for row in rows])))

    def solve_square(self, a: Rows, b: Rows, ncols: int) -> Optional[list[list[mpc]]]:
        n = len(a)
        if not n:
            return []
        if self.is_zero(self.det(a)):
            return None
        matrix = mp.matrix([[self.convert(x) for x in row] for row in a])
        columns = []
        for j in range(ncols):
            rhs = mp.matrix([self.convert(row[j]) for row in b])
            try:
                columns.append(mp.lu_solve(matrix, rhs))
            except ZeroDivisionError:
                logger.debug("lu_solve hit a numerically singular %dx%d block", n, n)
                return None
        return [[mpc(columns[j][i]) for j in range(ncols)] for i in range(n)]


def get_scalar_field(kind: str, precision_bits: int = 256, tolerance: Optional[mpf] = None) -> ScalarField:
    """Instantiate the scalar field for a BasedSpace.scalar_kind value."""
    if kind == EXACT_RATIONAL:
        return RationalField()
    if kind == HIGH_PRECISION_COMPLEX:
        with mp.workprec(precision_bits):
            return ComplexField(precision_bits, tolerance)
    raise ValueError(f"Unknown scalar kind: '{kind}'.")
