"""H^j_W(Spec O_F, D(r)) tables and the vanishing-order bookkeeping built on them.

Up to finite 2-groups, with u = r1 + r2 - 1, n = [F:ℚ] and b_r the Betti rank:

    r = 0   H^1 = ℤ^(r1+r2)/ℤ, H^2 = ext of Hom(O_F^*, ℤ) by Pic^D, H^3 = μ_F^D
    r < 0   H^1 = ℤ^b_r, H^2 = ext of Hom(K_{1-2r}, ℤ) by K_{-2r}^D, H^3 = (K_{1-2r})_tor^D
    r = 1   H^1 = ext of O_F^* by ℤ^r2, H^2 = ext of ker(Tr) by Pic, H^3 = coker(Tr)
    r > 1   H^1 = ext of K_{2r-1} by ℤ^b_r, H^2 = ext of H^0(t(r)) ≅ O_F by K_{2r-2},
            H^3 = H^1(t(r)) of order |d_F|^(r-1)

K-groups missing from the table fall back to the Borel rank with unknown torsion.
"""

from __future__ import annotations

import logging
from functools import lru_cache
from typing import Optional

from src.compare import ComparisonReport, compare_integers
from src.fields.cohomology import BOREL_RANK_SOURCE, CohomologyEntry, CohomologyTable, KGroupTable, borel_rank
from src.fields.invariants import FieldInvariants, betti_ranks, trace_form_cokernel_order
from src.simplicial.cotangent import t_complex
from src.simplicial.dold_kan import DEFAULT_TRUNCATION_GUARD
from src.zeta.hurwitz import EvalPrecision
from src.zeta.leading import leading_term, vanishing_order_with_source

logger = logging.getLogger(__name__)

# Above this r the H^3 order comes from the closed form |d_F|^(r-1) instead of
# the Dold-Kan computation of t(r).
T_COMPLEX_LIMIT = 3

BOREL_FALLBACK = "Borel rank rule; torsion not tabulated"


def _k_part(ktable: KGroupTable, n: int, inv: FieldInvariants) -> tuple[int, Optional[int], tuple[str, ...]]:
    """(rank, torsion order or None, sources) of K_n(O_F)."""
    if n in ktable:
        group = ktable.get(n)
        return group.rank, group.torsion, (group.source,)
    return borel_rank(n, inv.r1, inv.r2), None, (BOREL_FALLBACK,)


def _even_k_order(ktable: KGroupTable, n: int) -> tuple[Optional[int], tuple[str, ...]]:
    """|K_n(O_F)| for even n >= 2, which is finite."""
    if n in ktable:
        group = ktable.get(n)
        return group.torsion, (group.source,)
    return None, (BOREL_FALLBACK,)


@lru_cache(maxsize=64)
def t_complex_h1_order(poly: tuple[int, ...], r: int, truncation_guard: int = DEFAULT_TRUNCATION_GUARD) -> int:
    """|H^1(t(r))| from the derived exterior powers of the conormal complex."""
    group = t_complex(poly, r, truncation_guard).cohomology(1)
    if group.free_rank:
        logger.warning("H^1(t(%d)) of %s has free rank %d", r, poly, group.free_rank)
    return group.torsion_order


def describe_D_cohomology(
    inv: FieldInvariants,
    r: int,
    ktable: Optional[KGroupTable] = None,
    truncation_guard: int = DEFAULT_TRUNCATION_GUARD,
    t_complex_limit: int = T_COMPLEX_LIMIT,
) -> CohomologyTable:
    """Rank and torsion order of H^j_W(Spec O_F, D(r)) for j = 0..3."""
    ktable = ktable or KGroupTable.empty(inv.label)
    betti = betti_ranks(inv.r1, inv.r2, r)
    u = inv.unit_rank
    if r == 0:
        entries = (
            CohomologyEntry(1, u, 1, "Z^(r1+r2)/Z"),
            CohomologyEntry(2, u, inv.h, "Hom(units, Z) extended by Pic^D"),
            CohomologyEntry(3, 0, inv.w, "dual of the roots of unity"),
        )
    elif r == 1:
        entries = (
            CohomologyEntry(1, u + inv.r2, inv.w, "units of O_F extended by Z^r2"),
            CohomologyEntry(2, inv.degree - 1, inv.h, "ker(Tr: O_F -> Z) extended by Pic(O_F)"),
            CohomologyEntry(3, 0, trace_form_cokernel_order(inv.spec), "coker(Tr: O_F -> Z)"),
        )
    elif r < 0:
        odd_rank, odd_torsion, odd_sources = _k_part(ktable, 1 - 2 * r, inv)
        even_order, even_sources = _even_k_order(ktable, -2 * r)
        entries = (
            CohomologyEntry(1, betti.b, 1, f"Z^b_r, b_r = {betti.b}"),
            CohomologyEntry(
                2, odd_rank, even_order,
                f"Hom(K_{1 - 2 * r}(O_F), Z) extended by the dual of K_{-2 * r}(O_F)",
                even_sources + odd_sources,
            ),
            CohomologyEntry(3, 0, odd_torsion, f"dual of K_{1 - 2 * r}(O_F)_tor", odd_sources),
        )
    else:
        odd_rank, odd_torsion, odd_sources = _k_part(ktable, 2 * r - 1, inv)
        even_order, even_sources = _even_k_order(ktable, 2 * r - 2)
        if r <= t_complex_limit:
            h3 = t_complex_h1_order(inv.poly, r, truncation_guard)
            h3_description = "H^1(t(r)) by Dold-Kan derived exterior powers"
        else:
            h3 = abs(inv.discriminant) ** (r - 1)
            h3_description = "H^1(t(r)), order |d_F|^(r-1)"
        entries = (
            CohomologyEntry(
                1, betti.b + odd_rank, odd_torsion,
                f"K_{2 * r - 1}(O_F) extended by Z^b_r", odd_sources,
            ),
            CohomologyEntry(
                2, inv.degree, even_order,
                f"H^0(t(r)) = O_F extended by K_{2 * r - 2}(O_F)", even_sources,
            ),
            CohomologyEntry(3, 0, h3, h3_description),
        )
    table = CohomologyTable(inv.label, r, entries)
    logger.debug("D-cohomology of %s at r=%d: %s", inv.label, r, [str(e) for e in entries])
    return table


def alternating_rank(table: CohomologyTable) -> int:
    """Σ_j (-1)^j rank H^j; zero whenever the complexified groups form an acyclic complex."""
    return sum((-1) ** entry.j * entry.rank for entry in table.entries)


def check_D_cohomology(
    inv: FieldInvariants,
    r: int,
    ktable: Optional[KGroupTable] = None,
    truncation_guard: int = DEFAULT_TRUNCATION_GUARD,
) -> ComparisonReport:
    """Alternating rank of the D(r) table is 0; for r > 1 also |H^3| = |d_F|^(r-1)."""
    table = describe_D_cohomology(inv, r, ktable, truncation_guard)
    report = compare_integers(alternating_rank(table), 0)
    if r > 1:
        expected = abs(inv.discriminant) ** (r - 1)
        if table[3].torsion != expected:
            report.passed = False
            report.with_note(f"|H^3| = {table[3].torsion}, expected |d_F|^(r-1) = {expected}")
    unknown = [entry.j for entry in table.entries if entry.torsion is None]
    if unknown:
        report.with_note(f"torsion of H^{unknown} not tabulated")
    report.with_note("; ".join(str(entry) for entry in table.entries))
    return report


def verify_soule_order(
    inv: FieldInvariants,
    r: int,
    ktable: Optional[KGroupTable] = None,
    precision: Optional[EvalPrecision] = None,
) -> ComparisonReport:
    """Numeric vanishing order of ζ_F at r against the rank bookkeeping."""
    expected, source = vanishing_order_with_source(inv, r, ktable)
    leading = leading_term(inv, r, precision)
    report = compare_integers(leading.order, expected)
    report.with_note(f"fitted slope {leading.diagnostics.get('slope', float('nan')):.6f}")
    if source == BOREL_RANK_SOURCE:
        report.with_note(f"rank K_{1 - 2 * r} from the {BOREL_RANK_SOURCE}")
    return report
