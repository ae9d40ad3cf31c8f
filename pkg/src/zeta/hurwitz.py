"""Hurwitz zeta by Euler-Maclaurin summation with a certified remainder.

    ζ(s, a) = Σ_{k<N} (k+a)^(-s) + (N+a)^(1-s)/(s-1) + (N+a)^(-s)/2
              + Σ_{j=1..M} B_2j/(2j)! · (s)_(2j-1) · (N+a)^(-s-2j+1) + R_M

    |R_M| <= 4 |(s)_2M| (N+a)^(1-s-2M) / ((2π)^2M (s+2M-1))   for s + 2M - 1 > 0

(s)_k is the rising factorial. N is doubled until the bound meets the target.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional, Union

from mpmath import mp, mpf

from src.config import ZetaConfig, get_config
from src.errors import ConfigError, PoleError, PrecisionError
from src.gamma.engine import GUARD_BITS

logger = logging.getLogger(__name__)

RealArg = Union[int, Fraction, float, mpf]


@dataclass(frozen=True)
class EvalPrecision:
    working_bits: int
    euler_maclaurin_terms: int
    cutoff_n: int
    target_abs_error: float
    max_cutoff_n: int = 4096

    def __post_init__(self) -> None:
        if self.working_bits < 64:
            raise ConfigError(f"working_bits must be >= 64, got {self.working_bits}")
        if self.euler_maclaurin_terms < 1 or self.cutoff_n < 1:
            raise ConfigError("Euler-Maclaurin terms and cutoff must be positive")
        if not self.target_abs_error > 0:
            raise ConfigError("target_abs_error must be positive")

    @classmethod
    def from_config(cls, precision_bits: Optional[int] = None, zeta: Optional[ZetaConfig] = None) -> "EvalPrecision":
        app = get_config()
        zeta = zeta or app.zeta
        return cls(
            working_bits=precision_bits or app.precision_bits,
            euler_maclaurin_terms=zeta.euler_maclaurin_terms,
            cutoff_n=zeta.cutoff_n,
            target_abs_error=zeta.target_abs_error,
            max_cutoff_n=zeta.max_cutoff_n,
        )

    def with_bits(self, bits: int) -> "EvalPrecision":
        return replace(self, working_bits=bits)


def to_mpf(x: RealArg) -> mpf:
    if isinstance(x, Fraction):
        return mpf(x.numerator) / x.denominator
    return mpf(x)


def _rising(s: mpf, k: int) -> mpf:
    out = mpf(1)
    for i in range(k):
        out *= s + i
    return out


def remainder_bound(s: mpf, a: mpf, n: int, m: int) -> mpf:
    """Upper bound on |R_M| at cutoff n; +inf when s + 2M - 1 <= 0."""
    denominator = s + 2 * m - 1
    if denominator <= 0:
        return mp.inf
    return 4 * abs(_rising(s, 2 * m)) * (n + a) ** (1 - s - 2 * m) / ((2 * mp.pi) ** (2 * m) * denominator)


def _cutoff(s: mpf, a: mpf, precision: EvalPrecision) -> tuple[int, mpf]:
    n = precision.cutoff_n
    m = precision.euler_maclaurin_terms
    while True:
        bound = remainder_bound(s, a, n, m)
        if bound <= precision.target_abs_error:
            return n, bound
        if 2 * n > precision.max_cutoff_n:
            raise PrecisionError(
                f"Euler-Maclaurin bound {mp.nstr(bound, 3)} at s={mp.nstr(s, 8)} exceeds "
                f"{precision.target_abs_error} with N <= {precision.max_cutoff_n}"
            )
        n *= 2


def hurwitz_zeta(s: RealArg, a: RealArg, precision: EvalPrecision) -> mpf:
    """ζ(s, a) for real s ≠ 1 and 0 < a <= 1, with absolute error <= target_abs_error."""
    with mp.workprec(precision.working_bits + GUARD_BITS):
        s = to_mpf(s)
        a = to_mpf(a)
        if not 0 < a <= 1:
            raise ValueError(f"Hurwitz parameter must lie in (0, 1], got {a}")
        if abs(s - 1) <= mpf(2) ** (-precision.working_bits):
            raise PoleError("ζ(s, a) has a pole at s = 1")
        n, bound = _cutoff(s, a, precision)
        total = mp.fsum((k + a) ** (-s) for k in range(n))
        x = n + a
        total += x ** (1 - s) / (s - 1) + x ** (-s) / 2
        # (s)_(2j-1) · x^(-s-2j+1), updated two factors at a time
        term = s * x ** (-s - 1)
        factorial = mpf(2)
        for j in range(1, precision.euler_maclaurin_terms + 1):
            total += mp.bernoulli(2 * j) / factorial * term
            term *= (s + 2 * j - 1) * (s + 2 * j) / (x * x)
            factorial *= (2 * j + 1) * (2 * j + 2)
        logger.debug("hurwitz_zeta s=%s a=%s N=%d bound=%s", mp.nstr(s, 10), mp.nstr(a, 10), n, mp.nstr(bound, 3))
        return +total
