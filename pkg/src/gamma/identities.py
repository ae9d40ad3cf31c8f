"""Gamma identity checks: reflection, duplication, and the Γ(r)/Γ(r/2) ratio lemma."""

from __future__ import annotations

import logging
import random
from fractions import Fraction

from mpmath import mp, mpf

from src.compare import ComparisonReport, compare_exact
from src.errors import PoleError
from src.gamma.engine import GUARD_BITS, gamma_numeric, gamma_star, gamma_star_half, gamma_star_int
from src.gamma.values import ExactGammaValue, HighPrecisionComplex, _coerce

logger = logging.getLogger(__name__)

# Identities are accepted when the sides differ by at most this multiple of
# the combined error bounds.
_SLACK = 4


def check_reflection(r_num: int, r_den: int, precision_bits: int = 256) -> bool:
    """Γ(z)Γ(1-z) = π / sin(πz) at the rational point z = r_num / r_den."""
    z = Fraction(r_num, r_den)
    if z.denominator == 1:
        raise PoleError(f"reflection formula has poles at every integer, got z={z}")
    with mp.workprec(precision_bits + GUARD_BITS):
        lhs = gamma_numeric(z, precision_bits) * gamma_numeric(1 - z, precision_bits)
        zf = mpf(z.numerator) / z.denominator
        rhs_value = mp.pi / mp.sinpi(zf)
        rhs = HighPrecisionComplex.of(rhs_value, abs(rhs_value) * mpf(2) ** (4 - precision_bits))
        ok = lhs.agrees_with(rhs, _SLACK)
    logger.debug("reflection at %s: %s", z, ok)
    return bool(ok)


def check_duplication(z, precision_bits: int = 256) -> bool:
    """Γ(z)Γ(z + 1/2) = 2^(1-2z) Γ(2z) √π."""
    z = _coerce(z)
    with mp.workprec(precision_bits + GUARD_BITS):
        lhs = gamma_numeric(z, precision_bits) * gamma_numeric(z + mpf(1) / 2, precision_bits)
        scale_value = mpf(2) ** (1 - 2 * z.value) * mp.sqrt(mp.pi)
        scale = HighPrecisionComplex.of(scale_value, abs(scale_value) * mpf(2) ** (4 - precision_bits))
        rhs = scale * gamma_numeric(z * 2, precision_bits)
        ok = lhs.agrees_with(rhs, _SLACK)
    return bool(ok)


def gamma_ratio_lemma_lhs(r: int) -> ExactGammaValue:
    """Γ*(r) · Γ*(r/2)^(-1) · Γ*((1-r)/2), with Γ* substituted at poles."""
    gamma_r = gamma_star_int(r)
    gamma_half_r = gamma_star_int(r // 2) if r % 2 == 0 else gamma_star_half(r)
    gamma_reflected = gamma_star(1 - r).value  # argument (1 - r)/2
    return gamma_r / gamma_half_r * gamma_reflected


def check_gamma_ratio_lemma(r: int) -> ComparisonReport:
    """Γ(r)Γ(r/2)^(-1)Γ*((1-r)/2) equals √π (r even) or 1/√π (r odd) up to ±2^k."""
    lhs = gamma_ratio_lemma_lhs(r)
    expected = ExactGammaValue.pi_power(1 if r % 2 == 0 else -1)
    report = compare_exact(lhs, expected)
    if r < 1:
        report.with_note("Gamma* substituted at nonpositive arguments")
    return report


def random_identity_points(rng: random.Random, count: int) -> list[Fraction]:
    """Seeded non-integer rationals in (-6, 6) for the reflection/duplication sweeps."""
    points: list[Fraction] = []
    while len(points) < count:
        den = rng.randint(2, 12)
        num = rng.randint(-6 * den + 1, 6 * den - 1)
        z = Fraction(num, den)
        # duplication also evaluates at 2z, which must avoid poles
        if z.denominator == 1 or (2 * z).denominator == 1:
            continue
        points.append(z)
    return points
