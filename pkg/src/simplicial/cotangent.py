"""The conormal complex of a monogenic order, the t(r) complex, and rank-level additivity.

For O = ℤ[x]/(f) the conormal complex is [O --f'(α)--> O] in degrees 1, 0;
its H_0 is Ω_{O/ℤ}, of order |N(f'(α))| = |disc f|.

t(r) = ⊕_{q<r} λ^q(conormal)[-q] is assembled as one chain complex T with
top = r - 1 in which degree i of λ^q sits in degree i + top - q. Then

    H^j(t(r)) = ⊕_q H_{q-j}(λ^q) = H_{top-j}(T).

Cohomological degree j of t(r) is therefore homological degree top - j of T.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from typing import Optional

from src.compare import ComparisonReport, compare_integers
from src.errors import NotExactError
from src.linalg.matrix import Mat, determinant, rank
from src.linalg.scalars import RationalField
from src.simplicial.complexes import (
    ZERO_GROUP,
    ChainComplex,
    HomologyGroup,
    HomologyResult,
    euler_char_rank,
    homology,
)
from src.simplicial.dold_kan import DEFAULT_TRUNCATION_GUARD, derived_exterior_power
from src.simplicial.rings import BaseRing, FreeModuleMap

logger = logging.getLogger(__name__)

QQ = RationalField()


def derivative_element(ring: BaseRing, poly: tuple[int, ...]) -> tuple[int, ...]:
    """f'(α) in the power basis (degree n-1 < n, so no reduction is needed)."""
    coeffs = [i * c for i, c in enumerate(poly)][1:]
    return tuple(coeffs) + (0,) * (ring.rank - len(coeffs))


def conormal_complex(poly, ring: Optional[BaseRing] = None) -> ChainComplex:
    """[O --f'(α)--> O] over O = ℤ[x]/(f), degrees 1 -> 0."""
    ring = ring or BaseRing.from_polynomial(poly)
    poly = tuple(int(c) for c in poly)
    d = FreeModuleMap.from_rows(ring, [[derivative_element(ring, poly)]], 1)
    return ChainComplex(ring, (1, 1), (d,))


def polynomial_discriminant_abs(poly) -> int:
    """|N(f'(α))| = |disc f| for monic f."""
    ring = BaseRing.from_polynomial(poly)
    m = FreeModuleMap.from_rows(ring, [[derivative_element(ring, tuple(poly))]], 1).to_integer_matrix()
    return abs(int(determinant(QQ, m)))


@dataclass(frozen=True)
class TComplex:
    r: int
    top: int
    total: ChainComplex
    pieces: tuple[ChainComplex, ...]     # λ^q(conormal) for q = 0..r-1
    homology: HomologyResult = field(repr=False)

    def cohomology(self, j: int) -> HomologyGroup:
        """H^j(t(r)) as a ℤ-module."""
        degree = self.top - j
        if self.r <= 0 or degree < 0:
            return ZERO_GROUP
        return self.homology[degree]


def t_complex(poly, r: int, truncation_guard: int = DEFAULT_TRUNCATION_GUARD) -> TComplex:
    """t(r) for the monogenic order ℤ[x]/(f); the zero complex when r <= 0."""
    conormal = conormal_complex(poly)
    ring = conormal.ring
    if r <= 0:
        zero = ChainComplex(ring, (0,), ())
        return TComplex(r, 0, zero, (), homology(zero))
    top = r - 1
    pieces = []
    total: Optional[ChainComplex] = None
    for q in range(r):
        piece = derived_exterior_power(conormal, q, guard=truncation_guard).truncated(q * conormal.length)
        pieces.append(piece)
        placed = piece.shifted(top - q)
        total = placed if total is None else total.direct_sum(placed)
    logger.debug("t(%d) ranks over the order: %s", r, total.ranks)
    return TComplex(r, top, total, tuple(pieces), homology(total))


def check_t_complex_torsion(
    poly,
    r: int,
    discriminant: Optional[int] = None,
    truncation_guard: int = DEFAULT_TRUNCATION_GUARD,
) -> ComparisonReport:
    """|H^1(t(r))| against |d_F|^(r-1); both sides are 1 when r <= 0."""
    t = t_complex(poly, r, truncation_guard)
    disc = abs(discriminant) if discriminant is not None else polynomial_discriminant_abs(poly)
    h1 = t.cohomology(1)
    expected = disc ** (r - 1) if r >= 1 else 1
    report = compare_integers(h1.torsion_order, expected)
    if h1.free_rank:
        report.passed = False
        report.with_note(f"H^1 has free rank {h1.free_rank}")
    if r == 1:
        h0 = t.cohomology(0)
        degree = len(tuple(poly)) - 1
        if h0.free_rank != degree or h0.elementary_divisors:
            report.passed = False
            report.with_note(f"H^0 = {h0}, expected Z^{degree}")
    return report


# --- rank-level additivity of derived exterior powers ---


@dataclass(frozen=True)
class Presentation:
    """The module ℤ^b / relations·ℤ^a, relations injective."""

    relations: Mat  # b x a

    @property
    def generators(self) -> int:
        return self.relations.nrows

    def validate(self) -> None:
        if self.relations.ncols and rank(QQ, self.relations) != self.relations.ncols:
            raise NotExactError("relation matrix must be injective")

    def complex(self) -> ChainComplex:
        if not self.relations.ncols:
            return ChainComplex.from_integer_matrices([self.generators], [])
        return ChainComplex.from_integer_matrices([self.generators, self.relations.ncols], [self.relations])


@dataclass(frozen=True)
class ShortExactPresentation:
    """0 -> F' -> F -> F'' -> 0 with F presented by the horseshoe [[R', X], [0, R'']]."""

    sub: Presentation
    quotient: Presentation
    glue: Mat  # b' x a''

    def middle(self) -> Presentation:
        r1, r3, x = self.sub.relations, self.quotient.relations, self.glue
        top = r1.hstack(x)
        bottom = Mat.zeros(r3.nrows, r1.ncols).hstack(r3)
        return Presentation(top.vstack(bottom))

    def validate(self) -> None:
        self.sub.validate()
        self.quotient.validate()
        if self.glue.shape != (self.sub.generators, self.quotient.relations.ncols):
            raise NotExactError("glue matrix does not fit the two presentations")


def _random_presentation(rng: random.Random, max_generators: int) -> Presentation:
    b = rng.randint(0, max_generators)
    a = rng.randint(0, b)
    while True:
        rows = [[rng.randint(-4, 4) for _ in range(a)] for _ in range(b)]
        candidate = Presentation(Mat.from_rows(rows, ncols=a))
        if not a or rank(QQ, candidate.relations) == a:
            return candidate


def random_short_exact_presentation(rng: random.Random, max_generators: int = 3) -> ShortExactPresentation:
    sub = _random_presentation(rng, max_generators)
    quotient = _random_presentation(rng, max_generators)
    a3 = quotient.relations.ncols
    glue = Mat.from_rows([[rng.randint(-3, 3) for _ in range(a3)] for _ in range(sub.generators)], ncols=a3)
    return ShortExactPresentation(sub, quotient, glue)


def exterior_euler_rank(presentation: Presentation, n: int, guard: int = DEFAULT_TRUNCATION_GUARD) -> int:
    """χ^n at rank level: Σ (-1)^i rank H_i(λ^n(presentation))."""
    return euler_char_rank(derived_exterior_power(presentation.complex(), n, guard=guard))


def check_exterior_power_additivity(
    ses: ShortExactPresentation,
    n: int,
    guard: int = DEFAULT_TRUNCATION_GUARD,
) -> bool:
    """χ^n(F) = Σ_{p+q=n} χ^p(F') χ^q(F'') at the level of ranks."""
    ses.validate()
    middle = ses.middle()
    lhs = exterior_euler_rank(middle, n, guard)
    rhs = sum(
        exterior_euler_rank(ses.sub, p, guard) * exterior_euler_rank(ses.quotient, n - p, guard)
        for p in range(n + 1)
    )
    logger.debug("rank-level χ^%d: %d vs %d", n, lhs, rhs)
    return lhs == rhs
