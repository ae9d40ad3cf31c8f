"""Vanishing order and leading Laurent coefficient of ζ_F at an integer.

ζ_F is evaluated on the ladder s = r + ε_k, ε_k = 2^-(start + step·k). The order
a_r is the least-squares slope of log|ζ_F(r + ε)| against log ε, rounded; the
fit must sit within the configured gate of an integer. The leading coefficient
is the value at ε = 0 of the polynomial through (ε_k, ζ_F(r + ε_k)·ε_k^-a_r),
evaluated by Neville's scheme. The gap between the full extrapolation and the
one that drops the smallest ε is reported as the stability diagnostic.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional

from mpmath import mp, mpf

from src.config import ZetaConfig, get_config
from src.errors import OrderDetectionError, PrecisionError
from src.fields.cohomology import KGroupTable
from src.fields.invariants import FieldInvariants
from src.gamma.engine import GUARD_BITS
from src.gamma.values import HighPrecisionComplex
from src.zeta.dedekind import FieldLike, dedekind_zeta
from src.zeta.hurwitz import EvalPrecision

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LaurentLeading:
    order: int                        # a_r; negative for a pole
    leading: HighPrecisionComplex     # ζ*(F, r)
    diagnostics: dict = field(default_factory=dict, compare=False)


def ladder(zeta: ZetaConfig) -> list[mpf]:
    return [mpf(2) ** -(zeta.ladder_start_exponent + zeta.ladder_step_exponent * k) for k in range(zeta.ladder_points)]


def fit_slope(xs: list[mpf], ys: list[mpf]) -> tuple[mpf, mpf]:
    """Least-squares slope of ys against xs and the largest residual."""
    n = len(xs)
    mean_x = mp.fsum(xs) / n
    mean_y = mp.fsum(ys) / n
    sxx = mp.fsum((x - mean_x) ** 2 for x in xs)
    sxy = mp.fsum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys))
    slope = sxy / sxx
    intercept = mean_y - slope * mean_x
    residual = max(abs(y - (intercept + slope * x)) for x, y in zip(xs, ys))
    return slope, residual


def neville_at_zero(xs: list[mpf], ys: list[mpf]) -> mpf:
    """Value at 0 of the interpolating polynomial through (xs, ys)."""
    table = list(ys)
    n = len(xs)
    for level in range(1, n):
        for i in range(n - level):
            j = i + level
            table[i] = (xs[j] * table[i] - xs[i] * table[i + 1]) / (xs[j] - xs[i])
    return table[0]


def leading_term(
    field_: FieldLike,
    r: int,
    precision: Optional[EvalPrecision] = None,
    zeta: Optional[ZetaConfig] = None,
) -> LaurentLeading:
    """(a_r, ζ*(F, r)) from evaluations near s = r."""
    zeta = zeta or get_config().zeta
    precision = precision or EvalPrecision.from_config(zeta=zeta)
    with mp.workprec(precision.working_bits + GUARD_BITS):
        eps = ladder(zeta)
        values = [dedekind_zeta(field_, r + e, precision) for e in eps]
        if any(v == 0 for v in values):
            raise PrecisionError(f"ζ_F vanishes numerically near s = {r}")
        slope, residual = fit_slope([mp.log(e) for e in eps], [mp.log(abs(v)) for v in values])
        order = int(mp.nint(slope))
        if abs(slope - order) > zeta.order_gate:
            raise OrderDetectionError(
                f"{field_.label}: fitted order {mp.nstr(slope, 6)} at r={r} is not within "
                f"{zeta.order_gate} of an integer"
            )
        scaled = [v * e ** (-order) for v, e in zip(values, eps)]
        # extrapolate from the smallest ε outward
        xs, ys = eps[::-1], scaled[::-1]
        leading = neville_at_zero(xs, ys)
        coarse = neville_at_zero(xs[1:], ys[1:])
        stability = abs(leading - coarse)
        error = stability + mpf(precision.target_abs_error) * eps[-1] ** (-max(order, 0))
        diagnostics = {
            "slope": float(slope),
            "slope_residual": float(residual),
            "extrapolation_stability": float(stability),
        }
        logger.debug(
            "leading term of %s at r=%d: order %d (slope %s), value %s",
            field_.label, r, order, mp.nstr(slope, 8), mp.nstr(leading, 20),
        )
        return LaurentLeading(order, HighPrecisionComplex.of(leading, error), diagnostics)


def vanishing_order_with_source(
    inv: FieldInvariants, r: int, ktable: Optional[KGroupTable] = None
) -> tuple[int, Optional[str]]:
    """Expected order of ζ_F at r, and the source of the K-group rank it used (r < 0 only)."""
    if r < 0:
        ktable = ktable or KGroupTable.empty(inv.label)
        return ktable.rank_with_source(1 - 2 * r, inv)
    if r == 0:
        return inv.unit_rank, None
    if r == 1:
        return -1, None
    return 0, None


def expected_vanishing_order(inv: FieldInvariants, r: int, ktable: Optional[KGroupTable] = None) -> int:
    """Rank bookkeeping: rk K_{1-2r} for r < 0, r1 + r2 - 1 at 0, -1 at 1, 0 above."""
    return vanishing_order_with_source(inv, r, ktable)[0]
