"""Exception hierarchy.

Every error raised on purpose by the workbench derives from WorkbenchError,
so callers can catch the whole family at once. The CLI maps the data-side
subclasses (DataError) to exit code 3.
"""

from __future__ import annotations

from typing import Optional


class WorkbenchError(Exception):
    """Base class for all workbench errors."""


# --- Data and configuration ---


class DataError(WorkbenchError):
    """Bad or missing input data; the run cannot proceed as configured."""


class ConfigError(DataError):
    """Invalid configuration value."""


class ParseError(DataError):
    """Malformed data file. Carries the location of the problem."""

    def __init__(
        self,
        message: str,
        path: Optional[str] = None,
        line: Optional[int] = None,
        field: Optional[str] = None,
    ) -> None:
        self.message = message
        self.path = path
        self.line = line
        self.field = field
        where = []
        if path:
            where.append(str(path))
        if line is not None:
            where.append(f"line {line}")
        if field:
            where.append(f"field '{field}'")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)


class MissingDataError(DataError):
    """A K-group (or other ingested) value needed by a check is absent."""

    def __init__(self, message: str, field_label: str = "", index: Optional[int] = None) -> None:
        self.field_label = field_label
        self.index = index
        super().__init__(message)


class UnsupportedDegreeError(WorkbenchError):
    """Computed invariants were requested for a field of degree > 2."""


# --- Numerics ---


class PoleError(WorkbenchError):
    """Evaluation requested at (or within error of) a pole."""


class PrecisionError(WorkbenchError):
    """The requested accuracy cannot be reached with the configured limits."""


class OrderDetectionError(WorkbenchError):
    """The fitted vanishing order is not close enough to an integer."""


class ZeroComparandError(WorkbenchError):
    """A comparison operand is zero within its error bound."""


# --- Algebra ---


class NotExactError(WorkbenchError):
    """A sequence or complex that must be exact is not."""


class DiagramError(WorkbenchError):
    """A diagram that must commute does not."""


class SimplicialIdentityError(WorkbenchError):
    """Stored face/degeneracy maps violate a simplicial identity."""


class TruncationError(WorkbenchError):
    """A truncated simplicial computation is asked for degrees outside its sound window."""
