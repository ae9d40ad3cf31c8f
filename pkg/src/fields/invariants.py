"""Invariants of ℚ and quadratic fields.

Classes:
    FieldSpec        - label plus monic defining polynomial (ascending coefficients)
    FieldInvariants  - d_F, r1, r2, h, R, w, fundamental unit, provenance
    BettiRanks       - a_r, b_r

Quadratic fields are normalised to ℚ(√d) with d squarefree. The integral basis
is (1, ω) with ω = (1 + √d)/2 when d ≡ 1 mod 4 and ω = √d otherwise, and the
fundamental unit is returned as coordinates (x, y) of x + yω.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Optional, Sequence

from mpmath import mp, mpf
from sympy import Poly, factorint, symbols

from src.errors import ParseError, PrecisionError, UnsupportedDegreeError
from src.gamma.engine import GUARD_BITS
from src.models.schemas import FieldFile
from src.zeta.dedekind import KroneckerCharacter, dirichlet_L
from src.zeta.hurwitz import EvalPrecision

logger = logging.getLogger(__name__)

# Analytic class numbers must land this close to an integer.
CLASS_NUMBER_GATE = 1e-6


@dataclass(frozen=True)
class FieldSpec:
    label: str
    poly: tuple[int, ...]

    @classmethod
    def of(cls, label: str, poly: Sequence[int]) -> "FieldSpec":
        return cls(label, tuple(int(c) for c in poly))

    @property
    def degree(self) -> int:
        return len(self.poly) - 1

    @property
    def polynomial_discriminant(self) -> int:
        """b² - 4c for x² + bx + c, 1 for a linear polynomial."""
        if self.degree == 1:
            return 1
        if self.degree != 2:
            x = symbols("x")
            return int(Poly(list(reversed(self.poly)), x).discriminant())
        c, b, _ = self.poly
        return b * b - 4 * c


@dataclass(frozen=True)
class BettiRanks:
    a: int
    b: int


@dataclass(frozen=True)
class FieldInvariants:
    label: str
    poly: tuple[int, ...]
    discriminant: int
    r1: int
    r2: int
    h: int
    regulator: mpf = field(compare=False)
    w: int
    radicand: Optional[int] = None                  # squarefree d of ℚ(√d); None for ℚ and ingested fields
    fundamental_unit: Optional[tuple[int, int]] = None
    sources: tuple[str, ...] = ()

    @property
    def degree(self) -> int:
        return self.r1 + 2 * self.r2

    @property
    def unit_rank(self) -> int:
        return self.r1 + self.r2 - 1

    @property
    def spec(self) -> FieldSpec:
        return FieldSpec(self.label, self.poly)


# --- discriminant and signature ---


def squarefree_part(n: int) -> int:
    """The squarefree integer d with n = d·m² (sign kept)."""
    if n == 0:
        raise ValueError("0 has no squarefree part")
    d = -1 if n < 0 else 1
    for p, e in factorint(abs(n)).items():
        if e % 2:
            d *= p
    return d


def radicand(spec: FieldSpec) -> int:
    """Squarefree d with F = ℚ(√d); UnsupportedDegreeError beyond degree 2."""
    if spec.degree != 2:
        raise UnsupportedDegreeError(f"{spec.label}: computed invariants need degree <= 2, got {spec.degree}")
    d = squarefree_part(spec.polynomial_discriminant)
    if d == 1:
        raise ValueError(f"{spec.label}: polynomial {list(spec.poly)} is reducible")
    return d


def field_discriminant(spec: FieldSpec) -> int:
    """d if d ≡ 1 mod 4 else 4d for ℚ(√d); 1 for ℚ."""
    if spec.degree == 1:
        return 1
    d = radicand(spec)
    return d if d % 4 == 1 else 4 * d


def signature(spec: FieldSpec) -> tuple[int, int]:
    if spec.degree == 1:
        return 1, 0
    if spec.degree == 2:
        return (2, 0) if radicand(spec) > 0 else (0, 1)
    x = symbols("x")
    real_roots = Poly(list(reversed(spec.poly)), x).count_roots()
    return real_roots, (spec.degree - real_roots) // 2


def roots_of_unity(spec: FieldSpec) -> int:
    if spec.degree == 1:
        return 2
    d = radicand(spec)
    return {-1: 4, -3: 6}.get(d, 2)


def betti_ranks(r1: int, r2: int, r: int) -> BettiRanks:
    """a_r = r2 for even r, r1 + r2 for odd r; a_r + b_r = r1 + 2 r2."""
    a = r2 if r % 2 == 0 else r1 + r2
    return BettiRanks(a, r1 + 2 * r2 - a)


def trace_form_cokernel_order(spec: FieldSpec) -> int:
    """Order of ℤ / Tr(O_F): the gcd of the traces of the integral basis."""
    if spec.degree == 1:
        return 1
    d = radicand(spec)
    # Tr(1) = 2; Tr(ω) = 1 for ω = (1 + √d)/2, 0 for ω = √d
    return math.gcd(2, 1 if d % 4 == 1 else 0)


# --- class number ---


def reduced_forms(discriminant: int) -> list[tuple[int, int, int]]:
    """Primitive reduced positive definite forms (a, b, c) with b² - 4ac = discriminant.

    Reduced means |b| <= a <= c, with b >= 0 whenever |b| = a or a = c.
    """
    if discriminant >= 0 or discriminant % 4 not in (0, 1):
        raise ValueError(f"not a negative discriminant: {discriminant}")
    forms = []
    a = 1
    while 3 * a * a <= -discriminant:
        for b in range(-a + 1, a + 1):
            if (b - discriminant) % 2:
                continue
            numerator = b * b - discriminant
            if numerator % (4 * a):
                continue
            c = numerator // (4 * a)
            if c < a or (b < 0 and a == c):
                continue
            if math.gcd(math.gcd(a, abs(b)), c) != 1:
                continue
            forms.append((a, b, c))
        a += 1
    return forms


def analytic_class_number(discriminant: int, regulator: mpf, precision: EvalPrecision) -> mpf:
    """h from the class number formula at s = 1, before rounding."""
    with mp.workprec(precision.working_bits + GUARD_BITS):
        l_one = dirichlet_L(1, KroneckerCharacter(discriminant), precision)
        w = {-4: 4, -3: 6}.get(discriminant, 2)
        if discriminant < 0:
            return w * mp.sqrt(-discriminant) * l_one / (2 * mp.pi)
        return mp.sqrt(discriminant) * l_one / (2 * regulator)


def _rounded_class_number(value: mpf, label: str) -> int:
    h = int(mp.nint(value))
    if h < 1 or abs(value - h) > CLASS_NUMBER_GATE:
        raise PrecisionError(f"{label}: analytic class number {mp.nstr(value, 15)} is not an integer")
    return h


def class_number(spec: FieldSpec, precision: Optional[EvalPrecision] = None) -> int:
    """Reduced-form count for imaginary fields, rounded analytic value for real ones."""
    if spec.degree == 1:
        return 1
    disc = field_discriminant(spec)
    if disc < 0:
        return len(reduced_forms(disc))
    precision = precision or EvalPrecision.from_config()
    value = analytic_class_number(disc, regulator(spec, precision.working_bits), precision)
    return _rounded_class_number(value, spec.label)


# --- units and regulator ---


def _quadratic_convergents(p0: int, q0: int, radicand_d: int):
    """Convergents (p, q) of the continued fraction of (p0 + √D)/q0, q0 | D - p0²."""
    root = math.isqrt(radicand_d)
    big_p, big_q = p0, q0
    p_prev, p = 0, 1
    q_prev, q = 1, 0
    while True:
        a = (big_p + root) // big_q
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        yield p, q
        big_p = a * big_q - big_p
        big_q = (radicand_d - big_p * big_p) // big_q


def fundamental_unit(spec: FieldSpec, max_steps: int = 10_000) -> Optional[tuple[int, int]]:
    """(x, y) with ε = x + yω > 1 the fundamental unit; None when the unit rank is 0."""
    if spec.degree == 1:
        return None
    d = radicand(spec)
    if d < 0:
        return None
    half_integral = d % 4 == 1
    convergents = _quadratic_convergents(1, 2, d) if half_integral else _quadratic_convergents(0, 1, d)
    for step, (p, q) in enumerate(convergents):
        if step > max_steps:
            break
        if half_integral:
            if abs((2 * p - q) ** 2 - d * q * q) == 4:
                # p - qω is the small conjugate; the unit is p - qω̄ = (p - q) + qω
                return p - q, q
        elif abs(p * p - d * q * q) == 1:
            return p, q
    raise PrecisionError(f"{spec.label}: no unit among the first {max_steps} convergents")


def unit_value(d: int, unit: tuple[int, int], precision_bits: int) -> mpf:
    x, y = unit
    with mp.workprec(precision_bits + GUARD_BITS):
        omega = (1 + mp.sqrt(d)) / 2 if d % 4 == 1 else mp.sqrt(d)
        return x + y * omega


def regulator(spec: FieldSpec, precision_bits: int = 256) -> mpf:
    """log ε for real quadratic fields, 1 when the unit rank is 0."""
    unit = fundamental_unit(spec)
    if unit is None:
        return mpf(1)
    with mp.workprec(precision_bits + GUARD_BITS):
        return mp.log(unit_value(radicand(spec), unit, precision_bits))


# --- assembly ---


@lru_cache(maxsize=64)
def _computed_invariants(spec: FieldSpec, precision_bits: int) -> FieldInvariants:
    r1, r2 = signature(spec)
    precision = EvalPrecision.from_config(precision_bits)
    d = radicand(spec) if spec.degree == 2 else None
    unit = fundamental_unit(spec)
    reg = regulator(spec, precision_bits)
    disc = field_discriminant(spec)
    if spec.degree == 2 and disc > 0:
        h = _rounded_class_number(analytic_class_number(disc, reg, precision), spec.label)
    else:
        h = class_number(spec)
    inv = FieldInvariants(
        label=spec.label,
        poly=spec.poly,
        discriminant=disc,
        r1=r1,
        r2=r2,
        h=h,
        regulator=reg,
        w=roots_of_unity(spec),
        radicand=d,
        fundamental_unit=unit,
    )
    logger.debug("invariants of %s: d=%d h=%d w=%d", spec.label, disc, h, inv.w)
    return inv


def _ingested_only(spec: FieldSpec, ingested: FieldFile) -> FieldInvariants:
    missing = [name for name in ("d", "h", "w", "reg") if getattr(ingested, name) is None]
    if missing:
        raise UnsupportedDegreeError(
            f"{spec.label}: degree {spec.degree} needs ingested {', '.join(missing)}"
        )
    r1, r2 = signature(spec)
    return FieldInvariants(
        label=spec.label,
        poly=spec.poly,
        discriminant=ingested.d,
        r1=r1,
        r2=r2,
        h=ingested.h,
        regulator=mpf(ingested.reg),
        w=ingested.w,
        sources=(ingested.source,) if ingested.source else (),
    )


def _check_consistent(computed: FieldInvariants, ingested: FieldFile) -> None:
    for name, attr in (("d", "discriminant"), ("h", "h"), ("w", "w")):
        value = getattr(ingested, name)
        if value is not None and value != getattr(computed, attr):
            raise ParseError(
                f"ingested {name}={value} disagrees with computed {getattr(computed, attr)}",
                field=name,
            )
    if ingested.reg is not None:
        reg = mpf(ingested.reg)
        if abs(reg - computed.regulator) > mpf(10) ** -10 * computed.regulator:
            raise ParseError(
                f"ingested regulator {ingested.reg} disagrees with computed {mp.nstr(computed.regulator, 20)}",
                field="reg",
            )


def field_invariants(
    spec: FieldSpec,
    precision_bits: int = 256,
    ingested: Optional[FieldFile] = None,
) -> FieldInvariants:
    """Computed invariants for degree <= 2, checked against any ingested values.

    Higher-degree fields need every invariant ingested.
    """
    if spec.degree > 2:
        if ingested is None:
            raise UnsupportedDegreeError(f"{spec.label}: degree {spec.degree} needs ingested invariants")
        return _ingested_only(spec, ingested)
    computed = _computed_invariants(spec, precision_bits)
    if ingested is not None:
        _check_consistent(computed, ingested)
        if ingested.source:
            computed = replace(computed, sources=(ingested.source,))
    return computed
