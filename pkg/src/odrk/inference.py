"""Cell classification shared by parsing and profiling."""
from __future__ import annotations

import enum
import math
import re
from datetime import datetime, timedelta, timezone

MISSING_TOKENS = frozenset({"", "na", "nan", "null", "none"})
DEFAULT_THRESHOLD = 0.95

_INT = re.compile(r"^[+-]?\d+$")
_REAL = re.compile(r"^[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?$")
_ISO = re.compile(
    r"^(\d{4})-(\d{2})-(\d{2})"
    r"(?:[T ](\d{2}):(\d{2})(?::(\d{2})(?:[.,](\d{1,9}))?)?"
    r"(Z|[+-]\d{2}:?\d{2})?)?$"
)


class InferredType(str, enum.Enum):
    INTEGER = "integer"
    REAL = "real"
    DATETIME = "datetime"
    TEXT = "text"

    @property
    def numeric(self) -> bool:
        return self in (InferredType.INTEGER, InferredType.REAL)


def is_missing(cell: str) -> bool:
    return cell.strip().lower() in MISSING_TOKENS


def parse_int(cell: str) -> int | None:
    s = cell.strip()
    return int(s) if _INT.match(s) else None


def parse_real(cell: str) -> float | None:
    s = cell.strip()
    if not _REAL.match(s):
        return None
    value = float(s)
    return value if math.isfinite(value) else None


def parse_datetime(cell: str) -> datetime | None:
    """ISO-8601 calendar date, optionally with a time and offset."""
    m = _ISO.match(cell.strip())
    if not m:
        return None
    year, month, day, hour, minute, second, frac, tz = m.groups()
    try:
        micro = int((frac or "0")[:6].ljust(6, "0"))
        tzinfo = None
        if tz == "Z":
            tzinfo = timezone.utc
        elif tz:
            sign = -1 if tz[0] == "-" else 1
            digits = tz[1:].replace(":", "")
            tzinfo = timezone(sign * timedelta(hours=int(digits[:2]), minutes=int(digits[2:])))
        return datetime(
            int(year), int(month), int(day),
            int(hour or 0), int(minute or 0), int(second or 0), micro, tzinfo=tzinfo,
        )
    except ValueError:
        return None


def infer_column_type(cells, numeric_threshold: float = DEFAULT_THRESHOLD) -> InferredType:
    """First of integer, real, datetime whose share of non-missing cells reaches the threshold."""
    if not 0 < numeric_threshold <= 1:
        raise ValueError("numeric_threshold must be in (0, 1]")
    present = [c for c in cells if not is_missing(c)]
    if not present:
        return InferredType.TEXT
    n = len(present)
    for kind, parser in (
        (InferredType.INTEGER, parse_int),
        (InferredType.REAL, parse_real),
        (InferredType.DATETIME, parse_datetime),
    ):
        if sum(parser(c) is not None for c in present) / n >= numeric_threshold:
            return kind
    return InferredType.TEXT
