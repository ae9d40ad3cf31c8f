"""Comparison "up to sign and powers of 2".

Two nonzero quantities agree when |x / y| = 2^k for an integer k. Numeric
comparisons gate on |log2|x/y| - k| <= tol; exact comparisons (values that
expose ``power_of_two_ratio``) require π and i exponents to match exactly and
the rational parts to differ by ±2^k.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Optional

import mpmath
from mpmath import mp, mpc, mpf

from src.errors import ZeroComparandError

logger = logging.getLogger(__name__)

_RENDER_DIGITS = 20


@dataclass
class ComparisonReport:
    lhs: str
    rhs: str
    ratio: float                   # |lhs / rhs|
    log2_ratio: float
    k: Optional[int]               # nearest integer to log2_ratio
    nearest_int_deviation: float
    passed: bool
    tolerance: float
    notes: str = ""
    exact: bool = False            # decided by exact arithmetic, tolerance unused

    def with_note(self, note: str) -> "ComparisonReport":
        self.notes = f"{self.notes}; {note}" if self.notes else note
        return self


def _magnitude(x: Any) -> tuple[mpf, mpf]:
    """|x| and an absolute error bound for any supported scalar."""
    if hasattr(x, "error_bound") and hasattr(x, "value"):
        return abs(x.value), mpf(x.error_bound)
    if hasattr(x, "to_mpc"):
        v = abs(x.to_mpc(mp.prec))
        return v, v * mpf(2) ** (4 - mp.prec)
    if isinstance(x, Fraction):
        return abs(mpf(x.numerator) / x.denominator), mpf(0)
    return abs(mpc(x)), mpf(0)


def render(x: Any) -> str:
    if hasattr(x, "to_mpc") or isinstance(x, (Fraction, int)):
        return str(x)
    if hasattr(x, "value"):
        x = x.value
    x = mpc(x)
    return mpmath.nstr(x.real if x.imag == 0 else x, _RENDER_DIGITS)


def compare_up_to_sign_and_two(x: Any, y: Any, tol: float = 1e-8) -> ComparisonReport:
    """Numeric comparison of |x| and |y| modulo powers of two."""
    mx, ex = _magnitude(x)
    my, ey = _magnitude(y)
    if mx <= ex:
        raise ZeroComparandError(f"left operand {render(x)} is zero within its error bound")
    if my <= ey:
        raise ZeroComparandError(f"right operand {render(y)} is zero within its error bound")
    ratio = mx / my
    log2_ratio = mp.log(ratio, 2)
    k = int(mp.nint(log2_ratio))
    deviation = float(abs(log2_ratio - k))
    report = ComparisonReport(
        lhs=render(x),
        rhs=render(y),
        ratio=float(ratio),
        log2_ratio=float(log2_ratio),
        k=k,
        nearest_int_deviation=deviation,
        passed=deviation <= tol,
        tolerance=tol,
    )
    logger.debug("compare %s vs %s: log2=%.3g pass=%s", report.lhs, report.rhs, report.log2_ratio, report.passed)
    return report


def compare_exact(x: Any, y: Any, tol: float = 0.0) -> ComparisonReport:
    """Exact comparison of two ExactGammaValue-like values modulo ±2^k.

    Fails with a note when the π or i exponents differ.
    """
    k = x.power_of_two_ratio(y)
    ratio_value = x / y
    notes = ""
    if k is None:
        if ratio_value.pi_half_exponent != 0:
            notes = f"pi exponents differ by {Fraction(ratio_value.pi_half_exponent, 2)}"
        elif ratio_value.i_exponent != 0:
            notes = "ratio is imaginary"
        else:
            notes = f"rational ratio {ratio_value.coeff} is not a power of two"
    ratio = abs(float(ratio_value.coeff)) if ratio_value.pi_half_exponent == 0 else float(
        abs(ratio_value.to_mpc(64))
    )
    log2_ratio = float(mp.log(mpf(ratio), 2)) if ratio else float("nan")
    return ComparisonReport(
        lhs=str(x),
        rhs=str(y),
        ratio=ratio,
        log2_ratio=log2_ratio,
        k=k,
        nearest_int_deviation=0.0 if k is not None else abs(log2_ratio - round(log2_ratio)),
        passed=k is not None,
        tolerance=tol,
        notes=notes,
        exact=True,
    )


def compare_integers(x: int, y: int) -> ComparisonReport:
    """Exact equality of two integer invariants (orders, ranks, vanishing orders)."""
    equal = x == y
    if x and y:
        ratio = abs(x / y)
        log2_ratio = float(mp.log(mpf(ratio), 2))
    else:
        ratio = 1.0 if equal else float("inf")
        log2_ratio = 0.0 if equal else float("nan")
    return ComparisonReport(
        lhs=str(x),
        rhs=str(y),
        ratio=ratio,
        log2_ratio=log2_ratio,
        k=0 if equal else None,
        nearest_int_deviation=0.0,
        passed=equal,
        tolerance=0.0,
        notes="" if equal else f"{x} != {y}",
        exact=True,
    )
