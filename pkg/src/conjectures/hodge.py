"""Archimedean Gamma factors attached to Hodge data, and their duality under j -> 2d-2-j.

For the j-th cohomology of a smooth projective variety of dimension d-1, with
Hodge numbers h(p, q), p + q = j:

    complex place   Γ^j(s) = ∏_{p+q=j} Γ_C(s - min(p, q))^h(p,q)
    real place      Γ^j(s) = Γ_R(s-n)^h(n,+) Γ_R(s-n+1)^h(n,-) ∏_{p<q} Γ_C(s-p)^h(p,q)    (j = 2n)

Serre duality gives the dual data h'(d-1-p, d-1-q) = h(p, q) in degree 2d-2-j,
and Γ^j(s) = Γ^{2d-2-j}(s + d - j - 1). The closed forms for the ratio
Γ^j*(r) / Γ^{2d-2-j}*(d - r) are checked exactly, modulo signs and powers of 2.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from mpmath import mp

from src.compare import ComparisonReport, compare_exact
from src.gamma.engine import (
    GUARD_BITS,
    LeadingGamma,
    gamma_C_numeric,
    gamma_C_star,
    gamma_R_numeric,
    gamma_R_star,
    gamma_star_int,
)
from src.gamma.values import ExactGammaValue, HighPrecisionComplex

logger = logging.getLogger(__name__)

REAL = "real"
COMPLEX = "complex"
PLACES = (REAL, COMPLEX)

MAX_DIMENSION = 4
MAX_HODGE_NUMBER = 3

# Sides of a numeric identity agree within this multiple of the combined error bounds.
_SLACK = 4


@dataclass(frozen=True)
class HodgeData:
    """Hodge numbers of H^j at one archimedean place.

    h maps p to h(p, j - p); absent keys are 0. At a real place with j = 2n even,
    h_plus + h_minus = h(n, n) splits the middle term by the action of complex
    conjugation.
    """

    d: int
    j: int
    place: str
    h: dict
    h_plus: int = 0
    h_minus: int = 0

    def __post_init__(self) -> None:
        if self.place not in PLACES:
            raise ValueError(f"place must be one of {PLACES}, got '{self.place}'")
        if self.d < 1 or not 0 <= self.j <= 2 * (self.d - 1):
            raise ValueError(f"degree j={self.j} is outside 0..{2 * (self.d - 1)} for d={self.d}")
        for p, value in self.h.items():
            if p not in self.indices:
                raise ValueError(f"h({p}, {self.j - p}) lies outside the Hodge diamond of d={self.d}")
            if value < 0:
                raise ValueError(f"h({p}, {self.j - p}) = {value} is negative")
            if self.number(self.j - p) != value:
                raise ValueError(f"h({p}, {self.j - p}) != h({self.j - p}, {p})")
        if self.has_middle and self.place == REAL:
            if self.h_plus < 0 or self.h_minus < 0 or self.h_plus + self.h_minus != self.number(self.middle):
                raise ValueError(f"h(n,+) + h(n,-) must equal h(n,n) = {self.number(self.middle)}")
        elif self.h_plus or self.h_minus:
            raise ValueError("h(n,+) and h(n,-) only exist at a real place with j even")

    @property
    def indices(self) -> range:
        return range(max(0, self.j - self.d + 1), min(self.j, self.d - 1) + 1)

    @property
    def has_middle(self) -> bool:
        return self.j % 2 == 0

    @property
    def middle(self) -> int:
        return self.j // 2

    def number(self, p: int) -> int:
        return self.h.get(p, 0)

    @property
    def betti(self) -> int:
        """B^j = Σ_p h(p, j - p)."""
        return sum(self.h.values())

    @property
    def off_middle(self) -> int:
        """Σ h(p, q) over p < q."""
        return sum(self.number(p) for p in self.indices if 2 * p < self.j)

    @property
    def betti_plus(self) -> int:
        """Rank fixed by complex conjugation."""
        if not self.has_middle:
            return self.off_middle
        return self.off_middle + (self.h_plus if self.middle % 2 == 0 else self.h_minus)

    @property
    def betti_minus(self) -> int:
        return self.betti - self.betti_plus

    def betti_minus_at(self, r: int) -> int:
        """B^- when r is even, B^+ when r is odd."""
        return self.betti_minus if r % 2 == 0 else self.betti_plus

    def dual(self) -> "HodgeData":
        """Hodge data of H^{2d-2-j}: h'(d-1-p, d-1-q) = h(p, q), middle split kept."""
        c = self.d - 1
        return HodgeData(
            self.d,
            2 * c - self.j,
            self.place,
            {c - p: value for p, value in self.h.items()},
            self.h_plus,
            self.h_minus,
        )

    def local_factors(self) -> list[tuple[str, int, int]]:
        """(kind, shift, exponent) for each factor Γ_kind(s - shift)^exponent."""
        factors: list[tuple[str, int, int]] = []
        if self.place == COMPLEX:
            for p in self.indices:
                if self.number(p):
                    factors.append(("C", min(p, self.j - p), self.number(p)))
            return factors
        if self.has_middle:
            n = self.middle
            if self.h_plus:
                factors.append(("R", n, self.h_plus))
            if self.h_minus:
                factors.append(("R", n - 1, self.h_minus))
        for p in self.indices:
            if 2 * p < self.j and self.number(p):
                factors.append(("C", p, self.number(p)))
        return factors

    def __str__(self) -> str:
        numbers = ", ".join(f"h({p},{self.j - p})={self.number(p)}" for p in self.indices)
        split = f", h(n,+)={self.h_plus}, h(n,-)={self.h_minus}" if self.place == REAL and self.has_middle else ""
        return f"{self.place} d={self.d} j={self.j}: {numbers}{split}"


def random_hodge_data(rng: random.Random, place: Optional[str] = None) -> HodgeData:
    """Seeded symmetric Hodge data with d <= 4, h <= 3 and B^j > 0."""
    place = place or rng.choice(PLACES)
    while True:
        d = rng.randint(1, MAX_DIMENSION)
        j = rng.randint(0, 2 * (d - 1))
        h: dict[int, int] = {}
        for p in range(max(0, j - d + 1), min(j, d - 1) + 1):
            if 2 * p <= j:
                h[p] = h[j - p] = rng.randint(0, MAX_HODGE_NUMBER)
        if not sum(h.values()):
            continue
        h_plus = h_minus = 0
        if place == REAL and j % 2 == 0:
            h_plus = rng.randint(0, h[j // 2])
            h_minus = h[j // 2] - h_plus
        return HodgeData(d, j, place, h, h_plus, h_minus)


# --- Γ^j itself ---


def serre_gamma_factor(hodge: HodgeData, s, precision_bits: int = 256) -> HighPrecisionComplex:
    """Γ^j(s) numerically."""
    value = HighPrecisionComplex.exact(1)
    with mp.workprec(precision_bits + GUARD_BITS):
        for kind, shift, exponent in hodge.local_factors():
            local = gamma_R_numeric if kind == "R" else gamma_C_numeric
            value = value * local(s - shift, precision_bits) ** exponent
    return value


def serre_gamma_leading(hodge: HodgeData, r: int) -> LeadingGamma:
    """Exact leading Laurent coefficient and order of Γ^j at the integer r."""
    value = ExactGammaValue.rational(1)
    order = 0
    for kind, shift, exponent in hodge.local_factors():
        local = gamma_R_star(r - shift) if kind == "R" else gamma_C_star(r - shift)
        value = value * local.value**exponent
        order += local.order * exponent
    return LeadingGamma(value, order)


def check_gamma_shift_identity(hodge: HodgeData, s: Fraction, precision_bits: int = 256) -> bool:
    """Γ^j(s) = Γ^{2d-2-j}(s + d - j - 1) at a non-pole point s."""
    with mp.workprec(precision_bits + GUARD_BITS):
        left = serre_gamma_factor(hodge, s, precision_bits)
        right = serre_gamma_factor(hodge.dual(), s + hodge.d - hodge.j - 1, precision_bits)
        ok = left.agrees_with(right, _SLACK)
    if not ok:
        logger.debug("shift identity fails for %s at s=%s", hodge, s)
    return bool(ok)


# --- the ratio Γ^j*(r) / Γ^{2d-2-j}*(d - r) ---


def duality_ratio(hodge: HodgeData, r: int) -> tuple[ExactGammaValue, int]:
    """Γ^j*(r) / Γ^{2d-2-j}*(d - r) and the difference of the two pole orders."""
    top = serre_gamma_leading(hodge, r)
    bottom = serre_gamma_leading(hodge.dual(), hodge.d - r)
    return top.value / bottom.value, top.order - bottom.order


def real_place_closed_form(hodge: HodgeData, r: int) -> ExactGammaValue:
    """∏_p Γ*(r-p)^h(p,q) · π^(-B(r - j/2) + (B^{j,r})^-).

    (B^{j,r})^- is B^- for even r and B^+ for odd r. For odd j both equal B/2 and
    the exponent reduces to -(B/2)(2r - j - 1).
    """
    value = ExactGammaValue.rational(1)
    for p in hodge.indices:
        value = value * gamma_star_int(r - p) ** hodge.number(p)
    # counted in half powers of π
    half_pi_exponent = -hodge.betti * (2 * r - hodge.j) + 2 * hodge.betti_minus_at(r)
    return value * ExactGammaValue.pi_power(half_pi_exponent)


def complex_place_closed_form(hodge: HodgeData, r: int) -> ExactGammaValue:
    """(∏_p Γ*(r-p)^h(p,q))² · π^(-B(2r - (j+1)))."""
    value = ExactGammaValue.rational(1)
    for p in hodge.indices:
        value = value * gamma_star_int(r - p) ** hodge.number(p)
    return value**2 * ExactGammaValue.pi_power(-2 * hodge.betti * (2 * r - hodge.j - 1))


def _duality_report(hodge: HodgeData, r: int, closed_form: ExactGammaValue) -> ComparisonReport:
    ratio, order_gap = duality_ratio(hodge, r)
    report = compare_exact(ratio, closed_form)
    report.with_note(str(hodge))
    if order_gap:
        report.with_note(f"pole orders differ by {order_gap}")
    logger.debug("gamma duality at r=%d for %s: passed=%s", r, hodge, report.passed)
    return report


def check_real_place_gamma_duality(hodge: HodgeData, r: int) -> ComparisonReport:
    """Exact check of the real-place closed form for the duality ratio."""
    if hodge.place != REAL:
        raise ValueError(f"expected real-place Hodge data, got {hodge.place}")
    return _duality_report(hodge, r, real_place_closed_form(hodge, r))


def check_complex_place_gamma_duality(hodge: HodgeData, r: int) -> ComparisonReport:
    """Exact check of the complex-place closed form for the duality ratio."""
    if hodge.place != COMPLEX:
        raise ValueError(f"expected complex-place Hodge data, got {hodge.place}")
    return _duality_report(hodge, r, complex_place_closed_form(hodge, r))
