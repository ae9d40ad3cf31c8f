"""K-group tables and Weil-étale cohomology of Spec O_F with ℤ(r) coefficients.

All group structures here hold up to finite 2-torsion; every table entry says so
instead of guessing a 2-part.

Regimes (u = r1 + r2 - 1):
    r = 0   H^0 = ℤ, H^2 = Hom(O_F^*, ℤ) extended by Pic^D (rank u, order h), H^3 = μ_F^D
    r = 1   H^1 = O_F^* (rank u, torsion w), H^2 = Pic (order h), H^3 = ℤ
    r > 1   H^1 = K_{2r-1}(O_F), H^2 = K_{2r-2}(O_F)
    r < 0   H^2 of rank rk K_{1-2r}, torsion |K_{-2r}|;  H^3 of order |K_{1-2r}(O_F)_tor|
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional

from src.errors import MissingDataError
from src.fields.invariants import FieldInvariants
from src.models.schemas import KGroupFile

logger = logging.getLogger(__name__)

BOREL_RANK_SOURCE = "Borel rank rule; K-group not tabulated"


@dataclass(frozen=True)
class KGroup:
    n: int
    rank: int
    torsion: int
    source: str


def borel_rank(n: int, r1: int, r2: int) -> int:
    """rank K_n(O_F): r2 or r1 + r2 for n = 2m - 1 (m >= 2, even or odd m), 0 for even n >= 2."""
    if n < 2:
        raise ValueError(f"the Borel rule covers n >= 2, got {n}")
    if n % 2 == 0:
        return 0
    m = (n + 1) // 2
    return r2 if m % 2 == 0 else r1 + r2


@dataclass(frozen=True)
class KGroupTable:
    field_label: str
    entries: dict[int, KGroup] = field(default_factory=dict)

    @classmethod
    def from_file(cls, data: KGroupFile) -> "KGroupTable":
        return cls(data.field, {g.n: KGroup(g.n, g.rank, g.torsion, g.source) for g in data.groups})

    @classmethod
    def empty(cls, label: str) -> "KGroupTable":
        return cls(label, {})

    def __contains__(self, n: int) -> bool:
        return n in self.entries

    def get(self, n: int) -> KGroup:
        try:
            return self.entries[n]
        except KeyError:
            raise MissingDataError(
                f"K_{n} of {self.field_label} is not in the K-group table",
                field_label=self.field_label,
                index=n,
            ) from None

    def rank(self, n: int, inv: FieldInvariants) -> int:
        """Tabulated rank when present, the Borel rank otherwise."""
        return self.rank_with_source(n, inv)[0]

    def rank_with_source(self, n: int, inv: FieldInvariants) -> tuple[int, str]:
        if n in self.entries:
            return self.entries[n].rank, self.entries[n].source
        logger.debug("K_%d of %s not tabulated, using the Borel rank", n, self.field_label)
        return borel_rank(n, inv.r1, inv.r2), BOREL_RANK_SOURCE

    def borel_mismatches(self, inv: FieldInvariants) -> list[str]:
        """Entries whose rank disagrees with the Borel rule."""
        problems = []
        for n, entry in sorted(self.entries.items()):
            expected = borel_rank(n, inv.r1, inv.r2)
            if entry.rank != expected:
                problems.append(f"K_{n}: rank {entry.rank}, Borel rule gives {expected}")
        return problems


@dataclass(frozen=True)
class CohomologyEntry:
    j: int
    rank: int
    torsion: Optional[int]          # None when unknown
    description: str
    sources: tuple[str, ...] = ()
    up_to_2_torsion: bool = True

    def __str__(self) -> str:
        torsion = "?" if self.torsion is None else str(self.torsion)
        return f"H^{self.j}: rank {self.rank}, torsion {torsion} ({self.description})"


@dataclass(frozen=True)
class CohomologyTable:
    label: str
    r: int
    entries: tuple[CohomologyEntry, ...]

    def __getitem__(self, j: int) -> CohomologyEntry:
        for entry in self.entries:
            if entry.j == j:
                return entry
        return CohomologyEntry(j, 0, 1, "0")

    @property
    def sources(self) -> tuple[str, ...]:
        seen: list[str] = []
        for entry in self.entries:
            seen.extend(s for s in entry.sources if s not in seen)
        return tuple(seen)


def _k_entry(j: int, n: int, ktable: KGroupTable, description: str) -> CohomologyEntry:
    group = ktable.get(n)
    return CohomologyEntry(j, group.rank, group.torsion, description, (group.source,))


def weil_etale_table(inv: FieldInvariants, r: int, ktable: Optional[KGroupTable] = None) -> CohomologyTable:
    """H^j_W(Spec O_F, ℤ(r)) for j = 0..3 as (rank, torsion order)."""
    u = inv.unit_rank
    if r == 0:
        entries = (
            CohomologyEntry(0, 1, 1, "Z"),
            CohomologyEntry(2, u, inv.h, "Hom(units, Z) extended by Pic^D"),
            CohomologyEntry(3, 0, inv.w, "dual of the roots of unity"),
        )
    elif r == 1:
        entries = (
            CohomologyEntry(1, u, inv.w, "units of O_F"),
            CohomologyEntry(2, 0, inv.h, "Pic(O_F)"),
            CohomologyEntry(3, 1, 1, "Z"),
        )
    else:
        ktable = ktable or KGroupTable.empty(inv.label)
        if r > 1:
            entries = (
                _k_entry(1, 2 * r - 1, ktable, f"K_{2 * r - 1}(O_F)"),
                _k_entry(2, 2 * r - 2, ktable, f"K_{2 * r - 2}(O_F)"),
            )
        else:
            odd = ktable.get(1 - 2 * r)
            even = ktable.get(-2 * r)
            entries = (
                CohomologyEntry(
                    2, odd.rank, even.torsion,
                    f"dual of K_{1 - 2 * r}(O_F) mod torsion, extended by K_{-2 * r}(O_F)",
                    (odd.source, even.source),
                ),
                CohomologyEntry(3, 0, odd.torsion, f"dual of K_{1 - 2 * r}(O_F)_tor", (odd.source,)),
            )
    logger.debug("Weil-etale table of %s at r=%d: %s", inv.label, r, [str(e) for e in entries])
    return CohomologyTable(inv.label, r, entries)
