"""Fixture loading: data/fields/*.json and data/kgroups/*.json.

Files are parsed with json, validated against the pydantic schemas, and every
failure is re-raised as ParseError carrying the path, line and field.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Type, TypeVar

from pydantic import BaseModel, ValidationError

from src.errors import ParseError
from src.fields.cohomology import KGroupTable
from src.fields.invariants import FieldInvariants, FieldSpec, field_invariants
from src.models.schemas import FieldFile, KGroupFile

logger = logging.getLogger(__name__)

Model = TypeVar("Model", bound=BaseModel)

# Report and listing order of the shipped fixtures; other labels follow alphabetically.
FIXTURE_ORDER = ("Q", "Q_i", "Q_sqrt-3", "Q_sqrt-5", "Q_sqrt-23", "Q_sqrt2", "Q_sqrt5")


@dataclass(frozen=True)
class LoadedField:
    spec: FieldSpec
    data: FieldFile
    path: Path

    @property
    def label(self) -> str:
        return self.spec.label


def _line_of(text: str, key: str) -> Optional[int]:
    """1-based line of the first occurrence of "key": in the raw text."""
    match = re.search(rf'"{re.escape(key)}"\s*:', text)
    if match is None:
        return None
    return text.count("\n", 0, match.start()) + 1


def _parse(path: Path, model: Type[Model]) -> Model:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc}", path=str(path)) from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc.msg}", path=str(path), line=exc.lineno) from exc
    try:
        return model.model_validate(raw)
    except ValidationError as exc:
        error = exc.errors()[0]
        location = [str(part) for part in error["loc"]]
        top = location[0] if location else None
        raise ParseError(
            error["msg"],
            path=str(path),
            line=_line_of(text, top) if top else None,
            field=".".join(location) or None,
        ) from exc


def load_field_file(path: Path) -> LoadedField:
    data = _parse(Path(path), FieldFile)
    logger.debug("loaded field %s from %s", data.label, path)
    return LoadedField(FieldSpec.of(data.label, data.poly), data, Path(path))


def load_kgroup_file(path: Path) -> KGroupTable:
    data = _parse(Path(path), KGroupFile)
    indices = [g.n for g in data.groups]
    if len(indices) != len(set(indices)):
        raise ParseError("duplicate K-group index", path=str(path), field="groups")
    logger.debug("loaded K-groups of %s from %s: %s", data.field, path, sorted(indices))
    return KGroupTable.from_file(data)


def _fixture_key(label: str) -> tuple[int, str]:
    return (FIXTURE_ORDER.index(label), "") if label in FIXTURE_ORDER else (len(FIXTURE_ORDER), label)


def load_fields(data_dir: Path) -> list[LoadedField]:
    """Every field file under data_dir/fields, in fixture order."""
    directory = Path(data_dir) / "fields"
    if not directory.is_dir():
        raise ParseError("no fields directory", path=str(directory))
    fields = [load_field_file(p) for p in sorted(directory.glob("*.json"))]
    labels = [f.label for f in fields]
    duplicates = {label for label in labels if labels.count(label) > 1}
    if duplicates:
        raise ParseError(f"duplicate field labels {sorted(duplicates)}", path=str(directory))
    return sorted(fields, key=lambda f: _fixture_key(f.label))


def find_field(data_dir: Path, label: str) -> LoadedField:
    for loaded in load_fields(data_dir):
        if loaded.label == label:
            return loaded
    raise ParseError(f"unknown field '{label}'", path=str(Path(data_dir) / "fields"), field="label")


def load_kgroup_tables(data_dir: Path) -> dict[str, KGroupTable]:
    """Field label -> K-group table, for every file under data_dir/kgroups."""
    directory = Path(data_dir) / "kgroups"
    tables: dict[str, KGroupTable] = {}
    if not directory.is_dir():
        return tables
    for path in sorted(directory.glob("*.json")):
        table = load_kgroup_file(path)
        if table.field_label in tables:
            raise ParseError(f"second K-group table for '{table.field_label}'", path=str(path), field="field")
        tables[table.field_label] = table
    return tables


def ktable_for(tables: dict[str, KGroupTable], label: str) -> KGroupTable:
    return tables.get(label) or KGroupTable.empty(label)


def load_invariants(loaded: LoadedField, precision_bits: int = 256) -> FieldInvariants:
    """Invariants of a loaded field; consistency failures name the file."""
    try:
        return field_invariants(loaded.spec, precision_bits, loaded.data)
    except ParseError as exc:
        if exc.path:
            raise
        line = _line_of(loaded.path.read_text(encoding="utf-8"), exc.field) if exc.field else None
        raise ParseError(exc.message, path=str(loaded.path), line=line, field=exc.field) from exc
