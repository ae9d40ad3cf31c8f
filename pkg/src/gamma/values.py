"""Scalar types shared by the Gamma engine and everything downstream.

Classes:
    ExactGammaValue      - exact scalar  coeff · π^(pi_half_exponent/2) · i^i_exponent
    HighPrecisionComplex - mpmath complex number carrying an absolute error bound
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import mpmath
from mpmath import mp, mpc, mpf

Rational = Union[int, Fraction]


def power_of_two_exponent(q: Fraction) -> Optional[int]:
    """Return k when |q| = 2^k exactly, else None."""
    q = abs(Fraction(q))
    if q == 0:
        return None
    num, den = q.numerator, q.denominator
    if num & (num - 1) or den & (den - 1):
        return None
    return num.bit_length() - den.bit_length()


@dataclass(frozen=True)
class ExactGammaValue:
    """coeff · π^(pi_half_exponent/2) · i^i_exponent, kept in normal form.

    Normal form folds i^2 = -1 into the sign of coeff, so i_exponent is 0 or 1
    after construction. Equality is field-wise on the normal form.
    """

    coeff: Fraction
    pi_half_exponent: int = 0
    i_exponent: int = 0

    def __post_init__(self) -> None:
        coeff = Fraction(self.coeff)
        if coeff == 0:
            raise ValueError("ExactGammaValue coefficient must be nonzero")
        i_exp = self.i_exponent % 4
        if i_exp >= 2:
            coeff = -coeff
            i_exp -= 2
        object.__setattr__(self, "coeff", coeff)
        object.__setattr__(self, "i_exponent", i_exp)
        object.__setattr__(self, "pi_half_exponent", int(self.pi_half_exponent))

    # --- constructors ---

    @classmethod
    def rational(cls, q: Rational) -> "ExactGammaValue":
        return cls(Fraction(q))

    @classmethod
    def pi_power(cls, half_exponent: int) -> "ExactGammaValue":
        """π^(half_exponent/2)."""
        return cls(Fraction(1), half_exponent)

    @classmethod
    def two_pi_i_power(cls, k: int) -> "ExactGammaValue":
        """(2πi)^k."""
        return cls(Fraction(2) ** k, 2 * k, k)

    @classmethod
    def two_pi_power(cls, k: int) -> "ExactGammaValue":
        """(2π)^k."""
        return cls(Fraction(2) ** k, 2 * k)

    # --- arithmetic ---

    def __mul__(self, other: Union["ExactGammaValue", Rational]) -> "ExactGammaValue":
        if not isinstance(other, ExactGammaValue):
            other = ExactGammaValue.rational(other)
        return ExactGammaValue(
            self.coeff * other.coeff,
            self.pi_half_exponent + other.pi_half_exponent,
            self.i_exponent + other.i_exponent,
        )

    __rmul__ = __mul__

    def inverse(self) -> "ExactGammaValue":
        # 1/i = -i = i^3
        return ExactGammaValue(1 / self.coeff, -self.pi_half_exponent, -self.i_exponent)

    def __truediv__(self, other: Union["ExactGammaValue", Rational]) -> "ExactGammaValue":
        if not isinstance(other, ExactGammaValue):
            other = ExactGammaValue.rational(other)
        return self * other.inverse()

    def __rtruediv__(self, other: Rational) -> "ExactGammaValue":
        return ExactGammaValue.rational(other) * self.inverse()

    def __pow__(self, n: int) -> "ExactGammaValue":
        if n < 0:
            return self.inverse() ** (-n)
        result = ExactGammaValue(Fraction(1))
        for _ in range(n):
            result = result * self
        return result

    def __neg__(self) -> "ExactGammaValue":
        return ExactGammaValue(-self.coeff, self.pi_half_exponent, self.i_exponent)

    # --- comparison helpers ---

    def power_of_two_ratio(self, other: "ExactGammaValue") -> Optional[int]:
        """k such that self / other = ±2^k exactly, or None.

        π exponents and i exponents must agree exactly for a ratio to exist.
        """
        ratio = self / other
        if ratio.pi_half_exponent != 0 or ratio.i_exponent != 0:
            return None
        return power_of_two_exponent(ratio.coeff)

    def to_mpc(self, precision_bits: int = 256) -> mpc:
        with mp.workprec(precision_bits):
            value = mpf(self.coeff.numerator) / self.coeff.denominator
            value = value * mp.pi ** (mpf(self.pi_half_exponent) / 2)
            return mpc(0, value) if self.i_exponent else mpc(value, 0)

    def __str__(self) -> str:
        parts = [str(self.coeff)]
        if self.pi_half_exponent:
            exp = Fraction(self.pi_half_exponent, 2)
            parts.append(f"pi^({exp})")
        if self.i_exponent:
            parts.append("i")
        return "*".join(parts)


@dataclass(frozen=True)
class HighPrecisionComplex:
    """mpmath complex value plus an upper bound on its absolute error."""

    value: mpc
    error_bound: mpf

    @classmethod
    def exact(cls, x: Union[int, float, Fraction, mpf, mpc, str]) -> "HighPrecisionComplex":
        if isinstance(x, Fraction):
            x = mpf(x.numerator) / x.denominator
        return cls(mpc(x), mpf(0))

    @classmethod
    def of(cls, x, error_bound=0) -> "HighPrecisionComplex":
        return cls(mpc(x), mpf(error_bound))

    @property
    def real(self) -> mpf:
        return self.value.real

    @property
    def imag(self) -> mpf:
        return self.value.imag

    def __abs__(self) -> mpf:
        return abs(self.value)

    @staticmethod
    def _rounding(v: mpc) -> mpf:
        return abs(v) * mpf(2) ** (2 - mp.prec)

    def __add__(self, other) -> "HighPrecisionComplex":
        other = _coerce(other)
        v = self.value + other.value
        return HighPrecisionComplex(v, self.error_bound + other.error_bound + self._rounding(v))

    __radd__ = __add__

    def __neg__(self) -> "HighPrecisionComplex":
        return HighPrecisionComplex(-self.value, self.error_bound)

    def __sub__(self, other) -> "HighPrecisionComplex":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "HighPrecisionComplex":
        return _coerce(other) + (-self)

    def __mul__(self, other) -> "HighPrecisionComplex":
        other = _coerce(other)
        v = self.value * other.value
        err = (
            abs(self.value) * other.error_bound
            + abs(other.value) * self.error_bound
            + self.error_bound * other.error_bound
        )
        return HighPrecisionComplex(v, err + self._rounding(v))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "HighPrecisionComplex":
        other = _coerce(other)
        denom = abs(other.value)
        if denom <= other.error_bound:
            raise ZeroDivisionError("divisor is zero within its error bound")
        v = self.value / other.value
        err = (self.error_bound * denom + abs(self.value) * other.error_bound) / (
            denom * (denom - other.error_bound)
        )
        return HighPrecisionComplex(v, err + self._rounding(v))

    def __rtruediv__(self, other) -> "HighPrecisionComplex":
        return _coerce(other) / self

    def __pow__(self, n: int) -> "HighPrecisionComplex":
        result = HighPrecisionComplex.exact(1)
        base = self if n >= 0 else HighPrecisionComplex.exact(1) / self
        for _ in range(abs(n)):
            result = result * base
        return result

    def contains_zero(self) -> bool:
        return abs(self.value) <= self.error_bound

    def agrees_with(self, other, slack: float = 1.0) -> bool:
        """True when the two values differ by at most the sum of their error bounds."""
        other = _coerce(other)
        return abs(self.value - other.value) <= slack * (self.error_bound + other.error_bound)

    def __str__(self) -> str:
        if self.value.imag == 0:
            return mpmath.nstr(self.value.real, 20)
        return mpmath.nstr(self.value, 20)


def _coerce(x) -> HighPrecisionComplex:
    if isinstance(x, HighPrecisionComplex):
        return x
    if isinstance(x, ExactGammaValue):
        v = x.to_mpc(mp.prec)
        return HighPrecisionComplex(v, abs(v) * mpf(2) ** (4 - mp.prec))
    return HighPrecisionComplex.exact(x)
