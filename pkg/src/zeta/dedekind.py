"""Dirichlet L-functions and Dedekind zeta functions of ℚ and quadratic fields.

For a quadratic field F of discriminant d, ζ_F(s) = ζ(s) · L(s, χ_d) with χ_d
the Kronecker character. Both factors are finite sums of Hurwitz zeta values.

Functions here take any object exposing ``discriminant``, ``degree``, ``r1``,
``r2`` and ``label``; FieldInvariants satisfies this, as does a bare
QuadraticField.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Protocol, Sequence

from mpmath import mp, mpf
from sympy import jacobi_symbol, primerange

from src.compare import ComparisonReport, render
from src.errors import PoleError, UnsupportedDegreeError
from src.gamma.engine import GUARD_BITS, gamma_numeric
from src.zeta.hurwitz import EvalPrecision, RealArg, hurwitz_zeta, to_mpf

logger = logging.getLogger(__name__)


class FieldLike(Protocol):
    label: str
    discriminant: int
    r1: int
    r2: int

    @property
    def degree(self) -> int: ...


@dataclass(frozen=True)
class QuadraticField:
    """The minimal FieldLike: ℚ (discriminant 1) or a quadratic field."""

    discriminant: int
    label: str = ""

    @property
    def degree(self) -> int:
        return 1 if self.discriminant == 1 else 2

    @property
    def r1(self) -> int:
        return 1 if self.discriminant == 1 else (2 if self.discriminant > 0 else 0)

    @property
    def r2(self) -> int:
        return 1 if self.discriminant < 0 else 0


def kronecker_at_two(d: int) -> int:
    if d % 2 == 0:
        return 0
    return 1 if d % 8 in (1, 7) else -1


@dataclass(frozen=True)
class KroneckerCharacter:
    """χ_d(n) = (d / n) for a fundamental discriminant d; principal when d = 1."""

    discriminant: int

    @property
    def modulus(self) -> int:
        return abs(self.discriminant)

    @property
    def is_principal(self) -> bool:
        return self.discriminant == 1

    @cached_property
    def values(self) -> tuple[int, ...]:
        """χ(0), ..., χ(q - 1)."""
        return tuple(self._evaluate(n) for n in range(self.modulus))

    def _evaluate(self, n: int) -> int:
        d = self.discriminant
        if d == 1:
            return 1
        if n == 0:
            return 0
        e = 0
        while n % 2 == 0:
            n //= 2
            e += 1
        value = kronecker_at_two(d) ** e if e else 1
        if value == 0:
            return 0
        return value * (jacobi_symbol(d % n, n) if n > 1 else 1)

    def __call__(self, n: int) -> int:
        return self.values[n % self.modulus]


def dirichlet_L(s: RealArg, chi: KroneckerCharacter, precision: EvalPrecision) -> mpf:
    """L(s, χ) = q^(-s) Σ_{a=1..q} χ(a) ζ(s, a/q); at s = 1 the digamma form is used."""
    q = chi.modulus
    with mp.workprec(precision.working_bits + GUARD_BITS):
        s = to_mpf(s)
        at_one = abs(s - 1) <= mpf(2) ** (-precision.working_bits)
        if chi.is_principal:
            if at_one:
                raise PoleError("ζ(s) has a pole at s = 1")
            return hurwitz_zeta(s, 1, precision)
        if at_one:
            # L(1, χ) = -(1/q) Σ χ(a) ψ(a/q)
            return -mp.fsum(chi(a) * mp.digamma(mpf(a) / q) for a in range(1, q)) / q
        total = mp.fsum(chi(a) * hurwitz_zeta(s, Fraction(a, q), precision) for a in range(1, q) if chi(a))
        return total * mpf(q) ** (-s)


def riemann_zeta(s: RealArg, precision: EvalPrecision) -> mpf:
    return hurwitz_zeta(s, 1, precision)


def dedekind_zeta(field: FieldLike, s: RealArg, precision: EvalPrecision) -> mpf:
    """ζ_F(s) for ℚ and quadratic F, s real and not 1."""
    if field.degree == 1:
        return riemann_zeta(s, precision)
    if field.degree != 2:
        raise UnsupportedDegreeError(f"ζ_F is only evaluated for degree <= 2, {field.label} has degree {field.degree}")
    with mp.workprec(precision.working_bits + GUARD_BITS):
        return riemann_zeta(s, precision) * dirichlet_L(s, KroneckerCharacter(field.discriminant), precision)


def euler_product(field: FieldLike, s: RealArg, bound: int, precision: EvalPrecision) -> tuple[mpf, mpf]:
    """∏_{p < bound} of the local factors of ζ_F(s), and a bound on the relative tail.

    The tail over p >= bound is at most exp(2n·bound^(1-s)/(s-1)) - 1 for s > 1.
    """
    chi = KroneckerCharacter(field.discriminant) if field.degree == 2 else None
    with mp.workprec(precision.working_bits + GUARD_BITS):
        s = to_mpf(s)
        if s <= 1:
            raise ValueError("the Euler product converges only for s > 1")
        value = mpf(1)
        for p in primerange(2, bound):
            x = mpf(p) ** (-s)
            split = chi(p) if chi else 1
            if split == 1 and chi:
                value /= (1 - x) ** 2
            elif split == -1:
                value /= 1 - x * x
            else:
                value /= 1 - x
        tail = mp.expm1(2 * field.degree * mpf(bound) ** (1 - s) / (s - 1))
        return value, tail


def residue_class_number(field: FieldLike, h: int, regulator: mpf, w: int, precision: EvalPrecision) -> mpf:
    """Analytic class number formula at s = 1: 2^r1 (2π)^r2 hR / (w √|d|)."""
    with mp.workprec(precision.working_bits + GUARD_BITS):
        return (
            mpf(2) ** field.r1
            * (2 * mp.pi) ** field.r2
            * h
            * regulator
            / (w * mp.sqrt(abs(field.discriminant)))
        )


def analytic_residue(field: FieldLike, precision: EvalPrecision) -> mpf:
    """lim_{s->1} (s-1) ζ_F(s) = L(1, χ_d), or 1 for ℚ."""
    if field.degree == 1:
        return mpf(1)
    return dirichlet_L(1, KroneckerCharacter(field.discriminant), precision)


# --- completed zeta function and its functional equation ---


def _gamma_pole(x: mpf) -> bool:
    return x <= 0 and x == mp.floor(x)


def completed_phi(field: FieldLike, s: RealArg, precision: EvalPrecision) -> mpf:
    """φ(s) = Γ(s/2)^r1 Γ(s)^r2 (2^(-r2) √|d| π^(-n/2))^s ζ_F(s)."""
    with mp.workprec(precision.working_bits + GUARD_BITS):
        s = to_mpf(s)
        if s in (0, 1):
            raise PoleError(f"φ has a pole at s = {int(s)}")
        if (field.r1 and _gamma_pole(s / 2)) or (field.r2 and _gamma_pole(s)):
            raise PoleError(f"Gamma factor has a pole at s = {mp.nstr(s, 10)}")
        n = field.degree
        value = mpf(1)
        if field.r1:
            value *= gamma_numeric(s / 2, precision.working_bits).real ** field.r1
        if field.r2:
            value *= gamma_numeric(s, precision.working_bits).real ** field.r2
        conductor = mpf(2) ** (-field.r2) * mp.sqrt(abs(field.discriminant)) * mp.pi ** (-mpf(n) / 2)
        return value * conductor**s * dedekind_zeta(field, s, precision)


def functional_equation_points(rng: random.Random, count: int) -> list[Fraction]:
    """Seeded non-integral rationals in (-1.5, 2.5), clear of every pole of φ(s) and φ(1-s)."""
    points = []
    while len(points) < count:
        den = rng.randint(3, 12)
        num = rng.randint(-3 * den // 2 + 1, 5 * den // 2 - 1)
        s = Fraction(num, den)
        if s.denominator > 2:
            points.append(s)
    return points


def check_functional_equation(
    field: FieldLike,
    points: Sequence[RealArg],
    precision: EvalPrecision,
    tol: float = 1e-10,
) -> ComparisonReport:
    """max |φ(s) - φ(1-s)| over the sample points, gated at tol."""
    worst = mpf(0)
    worst_point: RealArg = points[0] if points else Fraction(1, 2)
    with mp.workprec(precision.working_bits + GUARD_BITS):
        for s in points:
            left = completed_phi(field, s, precision)
            right = completed_phi(field, 1 - s, precision)
            deviation = abs(left - right)
            if deviation > worst:
                worst, worst_point = deviation, s
        logger.info("functional equation for %s: max deviation %s", field.label, mp.nstr(worst, 3))
        return ComparisonReport(
            lhs=render(worst),
            rhs=f"{tol:g}",
            ratio=float(worst),
            log2_ratio=float(mp.log(worst, 2)) if worst else float("-inf"),
            k=None,
            nearest_int_deviation=float(worst),
            passed=worst < tol,
            tolerance=tol,
            notes=f"{len(points)} points, worst at s = {worst_point}",
        )
