"""Pydantic data-file and report schemas.

All data flowing in from fixture files and out to report documents is typed
here. Nothing else defines wire-format models; import from this module
throughout the app.

Classes:
    FieldFile       - one number field: label, defining polynomial, optional invariants
    KGroupEntry     - one K-group K_n(O_F): rank, torsion order, literature source
    KGroupFile      - a field label plus its K-group entries
    ReportItem      - one check outcome (one field, one r)
    ReportDocument  - ordered list of ReportItems plus run settings and totals
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field, field_validator

FORMAT_VERSION = 1

ItemStatus = Literal["passed", "failed", "skipped", "informational", "error"]


class FieldFile(BaseModel):
    # Data format version; only 1 is understood.
    format: int = Field(..., description="Data format version (must be 1).")

    # Short label used on the command line, e.g. "Q_sqrt-5".
    label: str

    # Monic defining polynomial, coefficients in ascending degree order:
    # x^2 + 5 is [5, 0, 1]. The polynomial must generate the ring of integers.
    poly: list[int]

    # Optional ingested invariants. When present they are checked against the
    # computed values for fields of degree <= 2.
    h: Optional[int] = None
    w: Optional[int] = None
    d: Optional[int] = None

    # Regulator as a decimal string so no precision is lost in JSON.
    reg: Optional[str] = None

    # Free-form provenance for ingested values.
    source: Optional[str] = None

    @field_validator("format")
    @classmethod
    def _known_format(cls, v: int) -> int:
        if v != FORMAT_VERSION:
            raise ValueError(f"unsupported format {v}, expected {FORMAT_VERSION}")
        return v

    @field_validator("poly")
    @classmethod
    def _monic(cls, v: list[int]) -> list[int]:
        if len(v) < 2:
            raise ValueError("polynomial must have degree >= 1")
        if v[-1] != 1:
            raise ValueError("polynomial must be monic (last coefficient 1)")
        return v


class KGroupEntry(BaseModel):
    # Index n of K_n(O_F), n >= 2.
    n: int = Field(..., ge=2)

    # Rank of K_n(O_F) as an abelian group.
    rank: int = Field(..., ge=0)

    # Order of the torsion subgroup.
    torsion: int = Field(..., ge=1)

    # Literature reference. Repeated in every report item that uses this entry.
    source: str


class KGroupFile(BaseModel):
    format: int

    # Label of the field these groups belong to (matches FieldFile.label).
    field: str

    groups: list[KGroupEntry]

    @field_validator("format")
    @classmethod
    def _known_format(cls, v: int) -> int:
        if v != FORMAT_VERSION:
            raise ValueError(f"unsupported format {v}, expected {FORMAT_VERSION}")
        return v


class ReportItem(BaseModel):
    # Registered kebab-case check name, e.g. "class-number".
    check: str

    # Field label, or "-" for checks that do not depend on a field.
    field: str

    # Integer point r of the check, or None when not applicable.
    r: Optional[int] = None

    # Rendered absolute values of the two compared sides.
    lhs: str = ""
    rhs: str = ""

    # log2 of |lhs / rhs|; None when no comparison took place.
    log2_ratio: Optional[float] = None

    # Nearest integer to log2_ratio, i.e. the power of two separating the sides.
    k: Optional[int] = None

    passed: bool = False

    status: ItemStatus = "failed"

    # Literature sources of every ingested value used by this item.
    sources: list[str] = Field(default_factory=list)

    notes: str = ""


class ReportDocument(BaseModel):
    precision_bits: int
    tolerance: float
    seed: int

    items: list[ReportItem]

    # Counts per status, e.g. {"passed": 40, "skipped": 2}.
    totals: dict[str, int] = Field(default_factory=dict)
