"""Base rings and maps between free modules over them.

A BaseRing is ℤ or an order given by integer structure constants on a fixed
ℤ-basis e_0 = 1, e_1, ..., e_{n-1}. Monogenic orders ℤ[x]/(f) use the power
basis 1, α, ..., α^(n-1). Ring elements are tuples of n integers.

FreeModuleMap is a matrix of ring elements. Everything that needs Smith
normal form first restricts scalars to ℤ (to_integer_matrix), so a map
between free modules of ranks a and b over an order of rank n becomes a
(b·n) × (a·n) integer matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Optional, Sequence

from src.linalg.matrix import Mat

INTEGERS = "integers"
ORDER = "order"

Element = tuple[int, ...]


def permutation_sign(indices: Sequence[int]) -> int:
    """Sign of the permutation that sorts `indices` (entries distinct)."""
    inversions = sum(1 for a, b in combinations(indices, 2) if a > b)
    return -1 if inversions % 2 else 1


@dataclass(frozen=True)
class BaseRing:
    kind: str
    rank: int
    # structure[i][j] holds the coordinates of e_i · e_j
    structure: tuple[tuple[Element, ...], ...]
    polynomial: Optional[tuple[int, ...]] = None  # ascending coefficients, monic

    @classmethod
    def integers(cls) -> "BaseRing":
        return cls(INTEGERS, 1, (((1,),),))

    @classmethod
    def from_polynomial(cls, poly: Sequence[int]) -> "BaseRing":
        """The monogenic order ℤ[x]/(f) for a monic f with ascending coefficients."""
        poly = tuple(int(c) for c in poly)
        n = len(poly) - 1
        if n < 1 or poly[-1] != 1:
            raise ValueError(f"polynomial must be monic of degree >= 1, got {list(poly)}")
        if n == 1:
            return cls(INTEGERS, 1, (((1,),),), poly)
        powers = [tuple(1 if i == 0 else 0 for i in range(n))]
        for _ in range(2 * n - 2):
            prev = powers[-1]
            top = prev[-1]
            shifted = (0,) + prev[:-1]
            powers.append(tuple(c - top * poly[i] for i, c in enumerate(shifted)))
        structure = tuple(tuple(powers[i + j] for j in range(n)) for i in range(n))
        ring = cls(ORDER, n, structure, poly)
        ring.check_axioms()
        return ring

    # --- element arithmetic ---

    @property
    def zero(self) -> Element:
        return (0,) * self.rank

    @property
    def one(self) -> Element:
        return (1,) + (0,) * (self.rank - 1)

    def from_int(self, n: int) -> Element:
        return (int(n),) + (0,) * (self.rank - 1)

    def basis_element(self, i: int) -> Element:
        return tuple(1 if j == i else 0 for j in range(self.rank))

    def is_zero(self, a: Element) -> bool:
        return not any(a)

    def add(self, a: Element, b: Element) -> Element:
        return tuple(x + y for x, y in zip(a, b))

    def neg(self, a: Element) -> Element:
        return tuple(-x for x in a)

    def mul(self, a: Element, b: Element) -> Element:
        if self.rank == 1:
            return (a[0] * b[0],)
        out = [0] * self.rank
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                if not y:
                    continue
                for k, c in enumerate(self.structure[i][j]):
                    if c:
                        out[k] += x * y * c
        return tuple(out)

    def multiplication_matrix(self, a: Element) -> list[list[int]]:
        """Rows of the integer matrix of x -> a·x in the ℤ-basis."""
        columns = [self.mul(a, self.basis_element(j)) for j in range(self.rank)]
        return [[columns[j][i] for j in range(self.rank)] for i in range(self.rank)]

    def check_axioms(self) -> None:
        """Unit, commutativity and associativity on the ℤ-basis; ValueError otherwise."""
        basis = [self.basis_element(i) for i in range(self.rank)]
        for a in basis:
            if self.mul(self.one, a) != a:
                raise ValueError("e_0 is not a unit for the structure constants")
            for b in basis:
                if self.mul(a, b) != self.mul(b, a):
                    raise ValueError("structure constants are not commutative")
                for c in basis:
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)):
                        raise ValueError("structure constants are not associative")


@dataclass(frozen=True)
class FreeModuleMap:
    ring: BaseRing
    domain_rank: int
    codomain_rank: int
    # codomain_rank rows of domain_rank ring elements
    entries: tuple[tuple[Element, ...], ...]

    @classmethod
    def zero(cls, ring: BaseRing, domain_rank: int, codomain_rank: int) -> "FreeModuleMap":
        row = (ring.zero,) * domain_rank
        return cls(ring, domain_rank, codomain_rank, (row,) * codomain_rank)

    @classmethod
    def identity(cls, ring: BaseRing, rank: int) -> "FreeModuleMap":
        rows = tuple(tuple(ring.one if i == j else ring.zero for j in range(rank)) for i in range(rank))
        return cls(ring, rank, rank, rows)

    @classmethod
    def from_rows(cls, ring: BaseRing, rows: Sequence[Sequence[Element]], domain_rank: int) -> "FreeModuleMap":
        rows = tuple(tuple(tuple(e) for e in row) for row in rows)
        if any(len(row) != domain_rank for row in rows):
            raise ValueError("ragged module map")
        return cls(ring, domain_rank, len(rows), rows)

    @classmethod
    def from_integer_rows(
        cls, ring: BaseRing, rows: Sequence[Sequence[int]], domain_rank: int
    ) -> "FreeModuleMap":
        """Integer scalars, embedded in the ring."""
        return cls.from_rows(ring, [[ring.from_int(x) for x in row] for row in rows], domain_rank)

    @classmethod
    def from_integer_matrix(cls, m: Mat) -> "FreeModuleMap":
        return cls.from_integer_rows(BaseRing.integers(), m.rows, m.ncols)

    @property
    def shape(self) -> tuple[int, int]:
        return self.codomain_rank, self.domain_rank

    def __getitem__(self, ij: tuple[int, int]) -> Element:
        i, j = ij
        return self.entries[i][j]

    def __matmul__(self, other: "FreeModuleMap") -> "FreeModuleMap":
        if self.domain_rank != other.codomain_rank:
            raise ValueError(f"cannot compose {self.shape} after {other.shape}")
        ring = self.ring
        rows = []
        for row in self.entries:
            out = []
            for j in range(other.domain_rank):
                total = ring.zero
                for k, a in enumerate(row):
                    b = other.entries[k][j]
                    if not ring.is_zero(a) and not ring.is_zero(b):
                        total = ring.add(total, ring.mul(a, b))
                out.append(total)
            rows.append(tuple(out))
        return FreeModuleMap(ring, other.domain_rank, self.codomain_rank, tuple(rows))

    def __add__(self, other: "FreeModuleMap") -> "FreeModuleMap":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        ring = self.ring
        rows = tuple(
            tuple(ring.add(a, b) for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)
        )
        return FreeModuleMap(ring, self.domain_rank, self.codomain_rank, rows)

    def __neg__(self) -> "FreeModuleMap":
        ring = self.ring
        rows = tuple(tuple(ring.neg(a) for a in row) for row in self.entries)
        return FreeModuleMap(ring, self.domain_rank, self.codomain_rank, rows)

    def is_zero(self) -> bool:
        return all(self.ring.is_zero(a) for row in self.entries for a in row)

    def column_support(self, j: int) -> list[tuple[int, Element]]:
        """Nonzero entries of column j as (row, element)."""
        return [(i, row[j]) for i, row in enumerate(self.entries) if not self.ring.is_zero(row[j])]

    def basis_permutation(self) -> Optional[list[tuple[int, int]]]:
        """(row, ±1) per column when every column is ±(a distinct standard vector), else None."""
        result = []
        seen = set()
        one, minus_one = self.ring.one, self.ring.neg(self.ring.one)
        for j in range(self.domain_rank):
            support = self.column_support(j)
            if len(support) != 1:
                return None
            row, value = support[0]
            if row in seen or value not in (one, minus_one):
                return None
            seen.add(row)
            result.append((row, 1 if value == one else -1))
        return result

    def direct_sum(self, other: "FreeModuleMap") -> "FreeModuleMap":
        ring = self.ring
        top = [row + (ring.zero,) * other.domain_rank for row in self.entries]
        bottom = [(ring.zero,) * self.domain_rank + row for row in other.entries]
        return FreeModuleMap(
            ring,
            self.domain_rank + other.domain_rank,
            self.codomain_rank + other.codomain_rank,
            tuple(top + bottom),
        )

    def to_integer_matrix(self) -> Mat:
        """Restriction of scalars to ℤ: each entry becomes its multiplication matrix."""
        n = self.ring.rank
        rows = [[0] * (self.domain_rank * n) for _ in range(self.codomain_rank * n)]
        for i, row in enumerate(self.entries):
            for j, a in enumerate(row):
                if self.ring.is_zero(a):
                    continue
                block = self.ring.multiplication_matrix(a)
                for bi in range(n):
                    for bj in range(n):
                        rows[i * n + bi][j * n + bj] = block[bi][bj]
        return Mat.from_rows(rows, ncols=self.domain_rank * n)

    def exterior_power(self, k: int) -> "FreeModuleMap":
        """Λ^k of the map: the k×k minors, k-subsets in lexicographic order.

        The wedge of the columns is expanded term by term, so sparse maps
        cost only the products of their column supports.
        """
        ring = self.ring
        sources = list(combinations(range(self.domain_rank), k))
        targets = list(combinations(range(self.codomain_rank), k))
        position = {subset: n for n, subset in enumerate(targets)}
        supports = [self.column_support(j) for j in range(self.domain_rank)]
        rows = [[ring.zero] * len(sources) for _ in targets]
        for c, subset in enumerate(sources):
            terms: dict[tuple[int, ...], Element] = {}
            for choice in product(*(supports[j] for j in subset)):
                indices = [row for row, _ in choice]
                if len(set(indices)) < k:
                    continue
                coeff = ring.one
                for _, value in choice:
                    coeff = ring.mul(coeff, value)
                if permutation_sign(indices) < 0:
                    coeff = ring.neg(coeff)
                key = tuple(sorted(indices))
                terms[key] = ring.add(terms.get(key, ring.zero), coeff)
            for key, value in terms.items():
                rows[position[key]][c] = value
        return FreeModuleMap(ring, len(sources), len(targets), tuple(tuple(r) for r in rows))
