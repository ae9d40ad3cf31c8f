"""Minkowski embedding matrix (σ_i(b_j)) of the integral basis.

det² = d_F, and det / √|d_F| = ±i^r2 since √d_F = i^r2 √|d_F|.
"""

from __future__ import annotations

import logging

from mpmath import mp, mpc, mpf

from src.compare import ComparisonReport, render
from src.errors import PrecisionError
from src.fields.invariants import FieldInvariants
from src.gamma.engine import GUARD_BITS
from src.linalg.matrix import Mat, determinant
from src.linalg.scalars import ComplexField

logger = logging.getLogger(__name__)


def embedding_matrix(inv: FieldInvariants, precision_bits: int = 256) -> Mat:
    """Rows are embeddings, columns the basis (1, ω); for complex F the pair σ, σ̄."""
    if inv.degree == 1:
        return Mat.from_rows([[mpc(1)]])
    if inv.radicand is None:
        raise PrecisionError(f"{inv.label}: no integral basis known for an ingested field")
    d = inv.radicand
    with mp.workprec(precision_bits + GUARD_BITS):
        root = mp.sqrt(mpc(d))          # i·√|d| when d < 0
        if d % 4 == 1:
            omega, conjugate = (1 + root) / 2, (1 - root) / 2
        else:
            omega, conjugate = root, -root
        return Mat.from_rows([[mpc(1), omega], [mpc(1), conjugate]])


def check_discriminant_det(inv: FieldInvariants, precision_bits: int = 256, tol: float = 1e-10) -> ComparisonReport:
    """det² against d_F within tol·|d_F|, and det / √|d_F| against ±1, ±i."""
    with mp.workprec(precision_bits + GUARD_BITS):
        m = embedding_matrix(inv, precision_bits)
        det = determinant(ComplexField(precision_bits), m)
        square = det * det
        d = mpf(inv.discriminant)
        deviation = abs(square - d) / abs(d)
        unit = det / mp.sqrt(abs(d))
        expected = mpc(0, 1) ** inv.r2
        unit_ok = min(abs(unit - expected), abs(unit + expected)) <= tol
        passed = deviation <= tol and unit_ok
        report = ComparisonReport(
            lhs=render(square),
            rhs=str(inv.discriminant),
            ratio=float(abs(square / d)),
            log2_ratio=float(mp.log(abs(square / d), 2)),
            k=0,
            nearest_int_deviation=float(deviation),
            passed=passed,
            tolerance=tol,
            notes=f"det/sqrt|d| = {render(unit)}",
        )
        if not unit_ok:
            report.with_note(f"expected ±i^{inv.r2}")
        logger.debug("embedding det for %s: %s", inv.label, report.notes)
        return report
