"""Text, JSON and CSV renderers for the CLI.

JSON output is json.dumps(..., sort_keys=True, indent=2) over plain data, so
the same seed and config always give byte-identical output.
"""

from __future__ import annotations

import csv
import io
import json
from typing import Any, Sequence

from mpmath import mp

from src.fields.invariants import FieldInvariants
from src.models.schemas import ReportDocument
from src.zeta.leading import LaurentLeading

_DIGITS = 30

REPORT_COLUMNS = ("check", "field", "r", "status", "k", "log2_ratio", "lhs", "rhs", "sources", "notes")
# The text table truncates these columns; JSON and CSV keep them whole.
_TEXT_WIDTHS = {"lhs": 24, "rhs": 24, "notes": 60}


def _json(data: Any) -> str:
    return json.dumps(data, sort_keys=True, indent=2)


def _csv(rows: Sequence[dict], columns: Sequence[str]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(columns), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({key: row.get(key, "") for key in columns})
    return buffer.getvalue().rstrip("\n")


def _key_values(data: dict) -> str:
    width = max(len(key) for key in data)
    return "\n".join(f"{key.ljust(width)}  {value}" for key, value in data.items())


def _clip(text: str, width: int) -> str:
    return text if len(text) <= width else text[: width - 3] + "..."


# --- fields ---


def field_summary(inv: FieldInvariants) -> dict:
    unit = inv.fundamental_unit
    return {
        "label": inv.label,
        "poly": list(inv.poly),
        "degree": inv.degree,
        "discriminant": inv.discriminant,
        "r1": inv.r1,
        "r2": inv.r2,
        "h": inv.h,
        "w": inv.w,
        "regulator": mp.nstr(inv.regulator, _DIGITS),
        "unit_rank": inv.unit_rank,
        "fundamental_unit": list(unit) if unit else None,
        "sources": list(inv.sources),
    }


def render_fields(fields: Sequence[FieldInvariants], fmt: str) -> str:
    rows = [field_summary(inv) for inv in fields]
    if fmt == "json":
        return _json(rows)
    if fmt == "csv":
        columns = tuple(rows[0]) if rows else ()
        return _csv([{k: (" ".join(map(str, v)) if isinstance(v, list) else v) for k, v in row.items()} for row in rows], columns)
    return "\n\n".join(_key_values(row) for row in rows)


# --- zeta values ---


def value_summary(label: str, s: Any, value: Any) -> dict:
    return {"field": label, "s": str(s), "value": mp.nstr(value, _DIGITS)}


def leading_summary(label: str, r: int, leading: LaurentLeading) -> dict:
    return {
        "field": label,
        "r": r,
        "order": leading.order,
        "leading": mp.nstr(leading.leading.real, _DIGITS),
        "error_bound": mp.nstr(leading.leading.error_bound, 5),
        **{key: value for key, value in sorted(leading.diagnostics.items())},
    }


def render_mapping(data: dict, fmt: str) -> str:
    if fmt == "json":
        return _json(data)
    if fmt == "csv":
        return _csv([data], tuple(data))
    return _key_values(data)


# --- reports ---


def _report_row(item: dict) -> dict:
    row = dict(item)
    row["sources"] = "; ".join(item["sources"])
    row["k"] = "" if item["k"] is None else item["k"]
    row["r"] = "" if item["r"] is None else item["r"]
    row["log2_ratio"] = "" if item["log2_ratio"] is None else f"{item['log2_ratio']:.6g}"
    return row


def _text_table(rows: Sequence[dict]) -> str:
    columns = [c for c in REPORT_COLUMNS if c != "sources"]
    cells = [[_clip(str(row[c]), _TEXT_WIDTHS.get(c, 1000)) for c in columns] for row in rows]
    widths = [max([len(c)] + [len(line[i]) for line in cells]) for i, c in enumerate(columns)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    lines.extend("  ".join(cell.ljust(w) for cell, w in zip(line, widths)).rstrip() for line in cells)
    return "\n".join(lines)


def render_report(document: ReportDocument, fmt: str) -> str:
    data = document.model_dump(mode="json")
    if fmt == "json":
        return _json(data)
    rows = [_report_row(item) for item in data["items"]]
    if fmt == "csv":
        return _csv(rows, REPORT_COLUMNS)
    totals = ", ".join(f"{status} {count}" for status, count in data["totals"].items())
    header = f"precision {document.precision_bits} bits, tolerance {document.tolerance:g}, seed {document.seed}"
    return "\n".join([header, _text_table(rows), f"totals: {totals}"])
