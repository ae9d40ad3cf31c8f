"""Gamma engine.

Numeric Γ with a certified error bound, plus exact leading Laurent
coefficients Γ* at integers and half-integers and of the local factors
Γ_R(s) = π^(-s/2) Γ(s/2) and Γ_C(s) = (2π)^(-s) Γ(s).

Numeric Γ uses the Stirling series for log Γ after shifting the argument
right by integer steps. The shift target grows with the precision
(max(20, 0.12·(bits + 16))) so the smallest Stirling term stays below the
target; the remainder after M terms is bounded by
|B_{2M+2}| / ((2M+2)(2M+1)|z|^(2M+1)) · sec(arg z / 2)^(2M+2).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from mpmath import mp, mpc, mpf

from src.errors import PoleError, PrecisionError
from src.gamma.values import ExactGammaValue, HighPrecisionComplex, _coerce

logger = logging.getLogger(__name__)

GUARD_BITS = 24
_MAX_STIRLING_TERMS = 400

Numeric = Union[HighPrecisionComplex, int, float, Fraction, mpf, mpc]


@dataclass(frozen=True)
class LeadingGamma:
    value: ExactGammaValue
    order: int  # -1 for a simple pole, 0 at regular points


def _shift_threshold(precision_bits: int) -> int:
    return max(20, math.ceil(0.12 * (precision_bits + 16)))


def _stirling_log_gamma(w: mpc, precision_bits: int) -> tuple[mpc, mpf]:
    """log Γ(w) for Re(w) large, and a bound on the truncation error."""
    target = mpf(2) ** (-(precision_bits + GUARD_BITS // 2))
    series = (w - mpf(1) / 2) * mp.log(w) - w + mp.log(2 * mp.pi) / 2
    sec_factor = 1 / mp.cos(mp.arg(w) / 2)
    abs_w = abs(w)
    w_power = w  # w^(2k-1)
    w_sq = w * w
    previous = mp.inf
    for k in range(1, _MAX_STIRLING_TERMS):
        series += mp.bernoulli(2 * k) / ((2 * k) * (2 * k - 1) * w_power)
        w_power *= w_sq
        bound = (
            abs(mp.bernoulli(2 * k + 2))
            / ((2 * k + 2) * (2 * k + 1) * abs_w ** (2 * k + 1))
            * sec_factor ** (2 * k + 2)
        )
        if bound < target:
            return series, bound
        if bound > previous:
            break
        previous = bound
    raise PrecisionError(f"Stirling series cannot reach 2^-{precision_bits} at |z|={mp.nstr(abs_w, 5)}")


def _check_pole(s: HighPrecisionComplex, precision_bits: int) -> None:
    slack = s.error_bound + mpf(2) ** (-precision_bits)
    if abs(s.value.imag) > slack:
        return
    n = mp.nint(s.value.real)
    if n <= 0 and abs(s.value.real - n) <= slack:
        raise PoleError(f"Gamma has a pole at {int(n)}")


def gamma_numeric(s: Numeric, precision_bits: int = 256) -> HighPrecisionComplex:
    """Γ(s) with error_bound <= 2^(8 - precision_bits)·|Γ(s)| for exact s.

    Input error in s is propagated through |Γ'(s)| = |Γ(s)ψ(s)|.
    """
    s = _coerce(s)
    _check_pole(s, precision_bits)
    with mp.workprec(precision_bits + GUARD_BITS):
        z = mpc(s.value)
        shift = max(0, math.ceil(_shift_threshold(precision_bits) - float(z.real)))
        log_gamma, tail = _stirling_log_gamma(z + shift, precision_bits)
        value = mp.exp(log_gamma)
        for k in range(shift):
            value /= z + k
        relative = 2 * tail + mpf(2) ** (4 - precision_bits)
        error = abs(value) * relative
        if s.error_bound:
            error += 2 * abs(value) * abs(mp.digamma(z)) * s.error_bound
        logger.debug("gamma_numeric: shift=%d tail=%s", shift, mp.nstr(tail, 3))
        if value.imag == 0:
            value = mpc(value.real, 0)
        return HighPrecisionComplex(value, error)


def gamma_R_numeric(s: Numeric, precision_bits: int = 256) -> HighPrecisionComplex:
    """Γ_R(s) = π^(-s/2) Γ(s/2)."""
    s = _coerce(s)
    with mp.workprec(precision_bits + GUARD_BITS):
        half = s / 2
        factor = HighPrecisionComplex.exact(mp.pi ** (-half.value))
        return factor * gamma_numeric(half, precision_bits)


def gamma_C_numeric(s: Numeric, precision_bits: int = 256) -> HighPrecisionComplex:
    """Γ_C(s) = (2π)^(-s) Γ(s)."""
    s = _coerce(s)
    with mp.workprec(precision_bits + GUARD_BITS):
        factor = HighPrecisionComplex.exact((2 * mp.pi) ** (-s.value))
        return factor * gamma_numeric(s, precision_bits)


# --- exact leading coefficients ---


def gamma_star_int(r: int) -> ExactGammaValue:
    """Γ*(r): (r-1)! for r >= 1, the residue (-1)^n / n! at r = -n <= 0."""
    if r >= 1:
        return ExactGammaValue.rational(math.factorial(r - 1))
    n = -r
    return ExactGammaValue.rational(Fraction((-1) ** n, math.factorial(n)))


def gamma_star_half(two_r: int) -> ExactGammaValue:
    """Γ(two_r / 2) for odd two_r, exactly, as a rational multiple of √π."""
    if two_r % 2 == 0:
        raise ValueError(f"gamma_star_half needs an odd argument, got {two_r}")
    if two_r > 0:
        # Γ(n + 1/2) = (2n)! / (4^n n!) √π
        n = (two_r - 1) // 2
        coeff = Fraction(math.factorial(2 * n), 4**n * math.factorial(n))
    else:
        # Γ(1/2 - m) = (-4)^m m! / (2m)! √π
        m = (1 - two_r) // 2
        coeff = Fraction((-4) ** m * math.factorial(m), math.factorial(2 * m))
    return ExactGammaValue(coeff, 1)


def gamma_star(two_x: int) -> LeadingGamma:
    """Leading coefficient and order of Γ at x = two_x / 2."""
    if two_x % 2:
        return LeadingGamma(gamma_star_half(two_x), 0)
    x = two_x // 2
    return LeadingGamma(gamma_star_int(x), -1 if x <= 0 else 0)


def gamma_R_star(x: int) -> LeadingGamma:
    """Leading Laurent coefficient of Γ_R(s) = π^(-s/2)Γ(s/2) at s = x.

    At even x <= 0 the pole of Γ(s/2) in the variable s - x picks up a
    factor 2, since s/2 - x/2 = (s - x)/2.
    """
    inner = gamma_star(x)
    value = ExactGammaValue.pi_power(-x) * inner.value
    if inner.order == -1:
        value = value * 2
    return LeadingGamma(value, inner.order)


def gamma_C_star(x: int) -> LeadingGamma:
    """Leading Laurent coefficient of Γ_C(s) = (2π)^(-s)Γ(s) at s = x."""
    inner = gamma_star(2 * x)
    return LeadingGamma(ExactGammaValue.two_pi_power(-x) * inner.value, inner.order)
