"""Bounded chain complexes of free modules and their homology.

Degrees run 0..top. differentials[n - 1] is d_n : C_n -> C_{n-1}.
Homology is computed as ℤ-modules after restriction of scalars:

    free rank of H_n   = (rank C_n - rank d_n) - rank d_{n+1}
    torsion of H_n     = elementary divisors of d_{n+1} greater than 1
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from typing import Optional

from src.errors import NotExactError
from src.linalg.integer import integer_kernel, smith_diagonal
from src.linalg.matrix import Mat
from src.simplicial.rings import BaseRing, FreeModuleMap

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ChainComplex:
    ring: BaseRing
    ranks: tuple[int, ...]                       # rank of C_n over the ring, n = 0..top
    differentials: tuple[FreeModuleMap, ...] = field(default=())

    def __post_init__(self) -> None:
        if len(self.differentials) != max(len(self.ranks) - 1, 0):
            raise ValueError(f"{len(self.ranks)} modules need {len(self.ranks) - 1} differentials")
        for n, d in enumerate(self.differentials, start=1):
            if d.shape != (self.ranks[n - 1], self.ranks[n]):
                raise ValueError(f"d_{n} has shape {d.shape}, expected {(self.ranks[n - 1], self.ranks[n])}")

    @classmethod
    def from_integer_matrices(cls, ranks: list[int], matrices: list[Mat]) -> "ChainComplex":
        return cls(
            BaseRing.integers(),
            tuple(ranks),
            tuple(FreeModuleMap.from_integer_matrix(m) for m in matrices),
        )

    @property
    def top_degree(self) -> int:
        return len(self.ranks) - 1

    @property
    def length(self) -> int:
        """Highest degree carrying a nonzero module (0 for the zero complex)."""
        nonzero = [n for n, r in enumerate(self.ranks) if r]
        return nonzero[-1] if nonzero else 0

    def differential(self, n: int) -> FreeModuleMap:
        """d_n : C_n -> C_{n-1}; the zero map outside the stored range."""
        if 1 <= n <= self.top_degree:
            return self.differentials[n - 1]
        source = self.ranks[n] if 0 <= n <= self.top_degree else 0
        target = self.ranks[n - 1] if 0 <= n - 1 <= self.top_degree else 0
        return FreeModuleMap.zero(self.ring, source, target)

    def integer_ranks(self) -> list[int]:
        return [r * self.ring.rank for r in self.ranks]

    def restrict_to_integers(self) -> "ChainComplex":
        if self.ring.rank == 1:
            return self
        return ChainComplex.from_integer_matrices(
            self.integer_ranks(), [d.to_integer_matrix() for d in self.differentials]
        )

    def check_square_zero(self) -> None:
        for n in range(2, self.top_degree + 1):
            if not (self.differential(n - 1) @ self.differential(n)).is_zero():
                raise NotExactError(f"d_{n - 1} o d_{n} is not zero")

    def truncated(self, top: int) -> "ChainComplex":
        """Degrees 0..top only."""
        top = min(top, self.top_degree)
        return ChainComplex(self.ring, self.ranks[: top + 1], self.differentials[:top])

    def shifted(self, q: int) -> "ChainComplex":
        """The complex moved up by q >= 0 degrees, zero below."""
        ranks = (0,) * q + self.ranks
        padding = tuple(
            FreeModuleMap.zero(self.ring, ranks[n], ranks[n - 1]) for n in range(1, q + 1) if n < len(ranks)
        )
        return ChainComplex(self.ring, ranks, padding + self.differentials)

    def direct_sum(self, other: "ChainComplex") -> "ChainComplex":
        top = max(self.top_degree, other.top_degree)
        left, right = self.padded(top), other.padded(top)
        ranks = tuple(a + b for a, b in zip(left.ranks, right.ranks))
        maps = tuple(a.direct_sum(b) for a, b in zip(left.differentials, right.differentials))
        return ChainComplex(self.ring, ranks, maps)

    def padded(self, top: int) -> "ChainComplex":
        """Extend with zero modules up to degree `top`."""
        if top <= self.top_degree:
            return self
        ranks = self.ranks + (0,) * (top - self.top_degree)
        maps = list(self.differentials)
        for n in range(self.top_degree + 1, top + 1):
            maps.append(FreeModuleMap.zero(self.ring, ranks[n], ranks[n - 1]))
        return ChainComplex(self.ring, ranks, tuple(maps))


@dataclass(frozen=True)
class HomologyGroup:
    free_rank: int
    elementary_divisors: tuple[int, ...] = ()

    @property
    def torsion_order(self) -> int:
        order = 1
        for d in self.elementary_divisors:
            order *= d
        return order

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.elementary_divisors

    def __str__(self) -> str:
        parts = ["Z" if self.free_rank == 1 else f"Z^{self.free_rank}"] if self.free_rank else []
        parts += [f"Z/{d}" for d in self.elementary_divisors]
        return " + ".join(parts) if parts else "0"


ZERO_GROUP = HomologyGroup(0)


@dataclass(frozen=True)
class HomologyResult:
    groups: tuple[HomologyGroup, ...]  # H_0 .. H_top as ℤ-modules

    def __getitem__(self, n: int) -> HomologyGroup:
        if 0 <= n < len(self.groups):
            return self.groups[n]
        return ZERO_GROUP

    @property
    def total_torsion_order(self) -> int:
        order = 1
        for g in self.groups:
            order *= g.torsion_order
        return order

    def truncated(self, top: int) -> "HomologyResult":
        return HomologyResult(self.groups[: top + 1])

    def nonzero_degrees(self) -> list[int]:
        return [n for n, g in enumerate(self.groups) if not g.is_zero]


def homology(complex_: ChainComplex) -> HomologyResult:
    """Homology in every stored degree, from the Smith diagonals of the differentials over ℤ."""
    integral = complex_.restrict_to_integers()
    ranks = list(integral.ranks)
    diagonals = [smith_diagonal(d.to_integer_matrix()) for d in integral.differentials]
    groups = []
    for n, dim in enumerate(ranks):
        outgoing = len(diagonals[n - 1]) if n >= 1 else 0
        incoming = diagonals[n] if n < len(diagonals) else []
        free = dim - outgoing - len(incoming)
        divisors = tuple(d for d in incoming if d > 1)
        groups.append(HomologyGroup(free, divisors))
    logger.debug("homology of complex with ranks %s: %s", ranks, [str(g) for g in groups])
    return HomologyResult(tuple(groups))


def euler_char_rank(complex_: ChainComplex) -> int:
    """Σ (-1)^i · free rank H_i, as ℤ-ranks."""
    return sum((-1) ** n * g.free_rank for n, g in enumerate(homology(complex_).groups))


def random_chain_complex(
    rng: random.Random,
    max_top: int = 3,
    max_rank: int = 3,
    bound: int = 3,
    ring: Optional[BaseRing] = None,
) -> ChainComplex:
    """A seeded random bounded complex over ℤ (base-changed to `ring` if given).

    Each d_{n+1} is a random integer combination of a kernel basis of d_n,
    so d o d = 0 by construction.
    """
    top = rng.randint(0, max_top)
    ranks = [rng.randint(0 if n else 1, max_rank) for n in range(top + 1)]
    matrices: list[Mat] = []
    for n in range(1, top + 1):
        if n == 1:
            rows = [[rng.randint(-bound, bound) for _ in range(ranks[1])] for _ in range(ranks[0])]
            matrices.append(Mat.from_rows(rows, ncols=ranks[1]))
            continue
        kernel = integer_kernel(matrices[-1])
        mix = Mat.from_rows(
            [[rng.randint(-bound, bound) for _ in range(ranks[n])] for _ in range(kernel.ncols)],
            ncols=ranks[n],
        )
        matrices.append(kernel @ mix if kernel.ncols else Mat.zeros(ranks[n - 1], ranks[n]))
    complex_ = ChainComplex.from_integer_matrices(ranks, matrices)
    if ring is None or ring.rank == 1:
        return complex_
    return ChainComplex(
        ring,
        complex_.ranks,
        tuple(FreeModuleMap.from_integer_rows(ring, m.rows, m.ncols) for m in matrices),
    )
