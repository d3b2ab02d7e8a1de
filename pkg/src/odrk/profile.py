"""Column profiling: counts, missing values, distinct values, numeric summary, histogram."""
from __future__ import annotations

import json
import math
from bisect import bisect_right
from collections import Counter
from dataclasses import asdict, dataclass, field

from .federation import render_aligned, sorted_counts
from .inference import (
    DEFAULT_THRESHOLD,
    InferredType,
    infer_column_type,
    is_missing,
    parse_real,
)
from .tabular import TableData

HISTOGRAM_BUCKETS = 10
TOP_VALUES = 5

__all__ = [
    "ColumnProfile",
    "NumericSummary",
    "TableProfile",
    "describe",
    "infer_column_type",
    "render_profile",
]


@dataclass(frozen=True)
class NumericSummary:
    min: float
    max: float
    mean: float
    std_dev: float | None


@dataclass(frozen=True)
class ColumnProfile:
    name: str
    inferred: InferredType
    count: int
    missing: int
    distinct: int
    numeric_summary: NumericSummary | None = None
    histogram: list[tuple[float, float, int]] | None = None
    top_values: list[tuple[str, int]] = field(default_factory=list)

    @property
    def present(self) -> int:
        return self.count - self.missing


@dataclass(frozen=True)
class TableProfile:
    row_count: int
    column_profiles: list[ColumnProfile]

    def to_dict(self) -> dict:
        return {
            "row_count": self.row_count,
            "columns": [
                {
                    "name": c.name,
                    "inferred": c.inferred.value,
                    "count": c.count,
                    "missing": c.missing,
                    "distinct": c.distinct,
                    "numeric_summary": asdict(c.numeric_summary) if c.numeric_summary else None,
                    "histogram": (
                        [{"lower": lo, "upper": hi, "count": n} for lo, hi, n in c.histogram]
                        if c.histogram is not None
                        else None
                    ),
                    "top_values": [{"value": v, "count": n} for v, n in c.top_values],
                }
                for c in self.column_profiles
            ],
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "TableProfile":
        columns = []
        for c in obj["columns"]:
            summary = c["numeric_summary"]
            hist = c["histogram"]
            columns.append(
                ColumnProfile(
                    name=c["name"],
                    inferred=InferredType(c["inferred"]),
                    count=c["count"],
                    missing=c["missing"],
                    distinct=c["distinct"],
                    numeric_summary=NumericSummary(**summary) if summary else None,
                    histogram=[(b["lower"], b["upper"], b["count"]) for b in hist] if hist is not None else None,
                    top_values=[(t["value"], t["count"]) for t in c["top_values"]],
                )
            )
        return cls(obj["row_count"], columns)


class _Accumulator:
    """One pass over a column: Welford mean/variance plus running min/max."""

    def __init__(self):
        self.missing = 0
        self.values = Counter()
        self.numbers: list[float] = []
        self.n = 0
        self.mean = 0.0
        self.m2 = 0.0
        self.lo = math.inf
        self.hi = -math.inf

    def add(self, cell: str) -> None:
        if is_missing(cell):
            self.missing += 1
            return
        self.values[cell] += 1
        x = parse_real(cell)
        if x is None:
            return
        self.numbers.append(x)
        self.n += 1
        delta = x - self.mean
        self.mean += delta / self.n
        self.m2 += delta * (x - self.mean)
        self.lo = min(self.lo, x)
        self.hi = max(self.hi, x)


def _histogram(numbers: list[float], lo: float, hi: float) -> list[tuple[float, float, int]]:
    """Equal-width buckets with edges ``lo + k * width``; the last bucket includes ``hi``."""
    if lo == hi:
        return [(lo, hi, len(numbers))]
    width = (hi - lo) / HISTOGRAM_BUCKETS
    edges = [lo + k * width for k in range(HISTOGRAM_BUCKETS)] + [hi]
    counts = [0] * HISTOGRAM_BUCKETS
    for x in numbers:
        counts[min(bisect_right(edges, x) - 1, HISTOGRAM_BUCKETS - 1)] += 1
    return [(edges[k], edges[k + 1], counts[k]) for k in range(HISTOGRAM_BUCKETS)]


def describe(table: TableData, numeric_threshold: float = DEFAULT_THRESHOLD) -> TableProfile:
    """Profile every column in one pass over the records.

    Numeric summary and histogram are only reported for integer/real columns;
    ``std_dev`` is the sample deviation and needs at least two numbers.
    """
    accs = [_Accumulator() for _ in table.header]
    for record in table.records:
        for acc, cell in zip(accs, record):
            acc.add(cell)

    profiles = []
    for i, (name, acc) in enumerate(zip(table.header, accs)):
        kind = infer_column_type((r[i] for r in table.records), numeric_threshold)
        summary = hist = None
        if kind.numeric and acc.n:
            std = math.sqrt(acc.m2 / (acc.n - 1)) if acc.n >= 2 else None
            mean = min(max(acc.mean, acc.lo), acc.hi)  # keep rounding noise inside [min, max]
            summary = NumericSummary(acc.lo, acc.hi, mean, std)
            hist = _histogram(acc.numbers, acc.lo, acc.hi)
        profiles.append(
            ColumnProfile(
                name=name,
                inferred=kind,
                count=len(table.records),
                missing=acc.missing,
                distinct=len(acc.values),
                numeric_summary=summary,
                histogram=hist,
                top_values=sorted_counts(acc.values)[:TOP_VALUES],
            )
        )
    return TableProfile(len(table.records), profiles)


def _num(x: float | None) -> str:
    if x is None:
        return "-"
    return f"{x:.6g}"


def render_profile(profile: TableProfile, format: str = "text") -> bytes:
    if format == "json":
        return json.dumps(profile.to_dict(), indent=2, sort_keys=True, ensure_ascii=False).encode("utf-8")
    if format != "text":
        raise ValueError(f"unknown profile format {format!r}")
    return _render_text(profile).encode("utf-8")


def _render_text(profile: TableProfile) -> str:
    """Summary grid, then one block per column with top values and histogram."""
    out = [f"rows: {profile.row_count}", ""]
    header = ["COLUMN", "TYPE", "COUNT", "MISSING", "DISTINCT", "MIN", "MAX", "MEAN", "STD"]
    grid = []
    for c in profile.column_profiles:
        s = c.numeric_summary
        grid.append([
            c.name, c.inferred.value, str(c.count), str(c.missing), str(c.distinct),
            _num(s.min if s else None), _num(s.max if s else None),
            _num(s.mean if s else None), _num(s.std_dev if s else None),
        ])
    out.append(render_aligned(header, grid).rstrip("\n"))
    for c in profile.column_profiles:
        out.append("")
        out.append(f"[{c.name}]")
        if c.top_values:
            out.append("  top values:")
            width = max(len(v) for v, _ in c.top_values)
            for value, n in c.top_values:
                out.append(f"    {value.ljust(width)}  {n}")
        else:
            out.append("  top values: -")
        if c.histogram is not None:
            out.append("  histogram:")
            rows = [(f"[{_num(lo)}, {_num(hi)}{']' if k == len(c.histogram) - 1 else ')'}", n)
                    for k, (lo, hi, n) in enumerate(c.histogram)]
            width = max(len(label) for label, _ in rows)
            peak = max(n for _, n in rows) or 1
            for label, n in rows:
                bar = "#" * round(20 * n / peak)
                out.append(f"    {label.ljust(width)}  {str(n).rjust(len(str(peak)))}  {bar}".rstrip())
    return "\n".join(out) + "\n"
