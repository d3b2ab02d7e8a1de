"""Delimited-text parsing, remote head/tail previews over byte ranges, format conversion.

Cells stay text end to end; typing is left to profiling.
"""
from __future__ import annotations

import codecs
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from itertools import islice

from .errors import DuplicateHeader, EmptyInput, EncodingError, NotTabular, ParseError, RaggedRow
from .inference import InferredType, infer_column_type
from .models import BitstreamRef, RepositoryEndpoint
from .repo_client import fetch_all, fetch_range

csv.field_size_limit(min(sys.maxsize, 2**31 - 1))

INITIAL_WINDOW = 64 * 1024
MAX_WINDOW = 8 * 1024 * 1024
FORMATS = ("csv", "tsv", "json", "ndjson")
DELIMITERS = {"csv": ",", "tsv": "\t"}
TABULAR_EXTENSIONS = {"csv": ",", "tsv": "\t", "tab": "\t", "txt": ","}
TABULAR_MEDIA = {"text/csv": ",", "text/tab-separated-values": "\t", "text/plain": ","}


@dataclass
class TableData:
    header: list[str]
    records: list[list[str]]
    column_types: list[InferredType] = field(default_factory=list)
    ragged_rows: int = 0

    def __post_init__(self):
        width = len(self.header)
        for i, rec in enumerate(self.records, start=1):
            if len(rec) != width:
                raise RaggedRow(i, width, len(rec))
        if not self.column_types:
            self.column_types = [infer_column_type(col) for col in self.columns()]
        if len(self.column_types) != width:
            raise ValueError("column_types must match header length")

    def columns(self) -> list[list[str]]:
        return [[rec[i] for rec in self.records] for i in range(len(self.header))]


@dataclass(frozen=True)
class PreviewSlice:
    header: list[str]
    rows: list[list[str]]
    position: str
    requested: int
    truncated_source: bool


def _decode(data: bytes, final: bool = True) -> str:
    # utf-8-sig drops a leading BOM; non-final decoding keeps a split trailing character back
    try:
        return codecs.getincrementaldecoder("utf-8-sig")().decode(data, final=final)
    except UnicodeDecodeError as exc:
        raise EncodingError(f"input is not valid UTF-8: {exc}") from exc


def _reader(text: str, delimiter: str, strict: bool):
    return csv.reader(io.StringIO(text, newline=""), delimiter=delimiter, strict=strict)


def _fit(records, width: int, strict: bool, first_number: int = 1) -> tuple[list[list[str]], int]:
    """Pad or cut records to ``width``; strict mode raises on the first mismatch."""
    out, ragged = [], 0
    for number, rec in enumerate(records, start=first_number):
        if len(rec) != width:
            if strict:
                raise RaggedRow(number, width, len(rec))
            ragged += 1
            rec = (rec + [""] * width)[:width]
        out.append(rec)
    return out, ragged


def parse_delimited(data: bytes, delimiter: str = ",", strict: bool = False) -> TableData:
    """Parse RFC 4180 text. The first record is the header; blank lines are skipped.

    ``strict`` rejects rows whose width differs from the header; otherwise they are
    padded with empty cells or truncated and counted in ``ragged_rows``.
    """
    text = _decode(data)
    try:
        raw = [r for r in _reader(text, delimiter, strict) if r]
    except csv.Error as exc:
        raise ParseError(str(exc)) from exc
    if not raw:
        raise EmptyInput("no header record")
    header, body = raw[0], raw[1:]
    records, ragged = _fit(body, len(header), strict)
    return TableData(header, records, ragged_rows=ragged)


def delimiter_for(bitstream: BitstreamRef) -> str:
    if bitstream.extension in TABULAR_EXTENSIONS:
        return TABULAR_EXTENSIONS[bitstream.extension]
    media = bitstream.media_type.split(";")[0].strip().lower()
    if media in TABULAR_MEDIA:
        return TABULAR_MEDIA[media]
    raise NotTabular(f"{bitstream.name} ({bitstream.media_type}) is not delimited text")


def _prefix(
    endpoint, bitstream, want: int, delimiter: str, strict: bool, window: int, fallback: bool
) -> tuple[list[str], list[list[str]], bool, int, int]:
    """Read a growing prefix until the header plus ``want`` records are complete.

    Returns (header, records, reached_eof, header_end_byte, total_size).
    """
    while True:
        if window > MAX_WINDOW:
            data = fetch_all(endpoint, bitstream)
            total, at_eof = len(data), True
        else:
            w = fetch_range(endpoint, bitstream, 0, window, fallback=fallback)
            data, total = w.bytes, w.total_size
            at_eof = w.length >= total
        text = _decode(data, final=at_eof)
        raw, lines_for_header, broken = [], None, False
        reader = _reader(text, delimiter, strict)
        try:
            for rec in reader:
                if rec:
                    raw.append(rec)
                    if lines_for_header is None:
                        lines_for_header = reader.line_num
                # a following record proves the ones before it are complete
                if len(raw) >= want + 2:
                    break
        except csv.Error as exc:
            if at_eof:
                raise ParseError(str(exc)) from exc
            broken = True
        if len(raw) >= want + 2:
            complete = raw[: want + 1]
        elif at_eof or broken:
            complete = raw
        else:
            complete = raw[:-1]
        if complete and (at_eof or len(complete) >= want + 1):
            header = complete[0]
            records, _ = _fit(complete[1:], len(header), strict)
            header_text = "".join(islice(io.StringIO(text, newline=""), lines_for_header))
            header_end = len(header_text.encode("utf-8")) + (3 if data.startswith(codecs.BOM_UTF8) else 0)
            return header, records, at_eof, header_end, total
        if at_eof:
            raise EmptyInput(f"{bitstream.name} has no header record")
        window *= 2


def preview_head(
    endpoint: RepositoryEndpoint,
    bitstream: BitstreamRef,
    n: int,
    strict: bool = False,
    initial_window: int = INITIAL_WINDOW,
    fallback: bool = True,
) -> PreviewSlice:
    """First ``n`` records without downloading the whole file."""
    if n <= 0:
        raise ValueError("n must be positive")
    delimiter = delimiter_for(bitstream)
    header, records, at_eof, _, _ = _prefix(
        endpoint, bitstream, n, delimiter, strict, initial_window, fallback
    )
    return PreviewSlice(header, records, "head", n, truncated_source=len(records) < n)


def preview_tail(
    endpoint: RepositoryEndpoint,
    bitstream: BitstreamRef,
    n: int,
    strict: bool = False,
    initial_window: int = INITIAL_WINDOW,
    fallback: bool = True,
) -> PreviewSlice:
    """Last ``n`` records read from a growing suffix window.

    The first line of each window is discarded since it may be partial. A window is
    accepted once it parses cleanly, every record in it has the header's width, it
    holds more than ``n`` records, and its last ``n`` records agree with those of
    the previous (smaller) window. Windows reaching into the header fall back to an
    exact parse of the whole file.
    """
    if n <= 0:
        raise ValueError("n must be positive")
    delimiter = delimiter_for(bitstream)
    header, _, _, header_end, total = _prefix(
        endpoint, bitstream, 0, delimiter, strict, min(initial_window, INITIAL_WINDOW), fallback
    )
    width = len(header)
    previous = None
    window = initial_window
    while True:
        start = max(0, total - window)
        if start <= header_end or window > MAX_WINDOW:
            if window > MAX_WINDOW:
                data = fetch_all(endpoint, bitstream)
            else:
                data = fetch_range(endpoint, bitstream, 0, total, fallback=fallback).bytes if total else b""
            table = parse_delimited(data, delimiter, strict)
            rows = table.records[-n:]
            return PreviewSlice(table.header, rows, "tail", n, truncated_source=len(table.records) < n)
        w = fetch_range(endpoint, bitstream, start, total - start, fallback=fallback)
        candidate = _tail_candidate(w.bytes, delimiter, width, n)
        if candidate is not None and candidate == previous:
            return PreviewSlice(header, candidate, "tail", n, truncated_source=False)
        previous = candidate
        window *= 2


def _tail_candidate(data: bytes, delimiter: str, width: int, n: int):
    cut = data.find(b"\n")
    if cut < 0:
        return None
    try:
        text = data[cut + 1:].decode("utf-8")
        raw = [r for r in _reader(text, delimiter, strict=True) if r]
    except (UnicodeDecodeError, csv.Error):
        return None
    if len(raw) < n + 1 or any(len(r) != width for r in raw):
        return None
    return raw[-n:]


def fetch_table(
    endpoint: RepositoryEndpoint, bitstream: BitstreamRef, strict: bool = False
) -> TableData:
    """Download and parse a whole delimited bitstream."""
    return parse_delimited(fetch_all(endpoint, bitstream), delimiter_for(bitstream), strict)


def _quote(cell: str, delimiter: str) -> str:
    if any(ch in cell for ch in (delimiter, '"', "\n", "\r")) or cell.startswith("\ufeff"):
        return '"' + cell.replace('"', '""') + '"'
    return cell


def write_delimited(rows, delimiter: str = ",") -> str:
    """RFC 4180 writer with ``\\n`` line ends; quotes only where needed."""
    lines = []
    for row in rows:
        if len(row) == 1 and row[0] == "":
            lines.append('""')  # a bare empty line would read back as no record
        else:
            lines.append(delimiter.join(_quote(c, delimiter) for c in row))
    return "".join(line + "\n" for line in lines)


def convert(table: TableData, target: str) -> bytes:
    if target in DELIMITERS:
        text = write_delimited([table.header, *table.records], DELIMITERS[target])
        return text.encode("utf-8")
    if target not in ("json", "ndjson"):
        raise ValueError(f"unknown target format {target!r}; choose from {FORMATS}")
    seen = set()
    dupes = sorted({h for h in table.header if h in seen or seen.add(h)})
    if dupes:
        raise DuplicateHeader(f"duplicate column names: {', '.join(dupes)}")
    objects = [dict(zip(table.header, rec)) for rec in table.records]
    if target == "json":
        return json.dumps(objects, ensure_ascii=False).encode("utf-8")
    return "".join(json.dumps(o, ensure_ascii=False) + "\n" for o in objects).encode("utf-8")


def read_table(data: bytes, fmt: str, strict: bool = False) -> TableData:
    """Inverse of :func:`convert`. A JSON document with no rows has no recoverable header."""
    if fmt in DELIMITERS:
        return parse_delimited(data, DELIMITERS[fmt], strict)
    text = _decode(data)
    try:
        if fmt == "json":
            objects = json.loads(text)
        elif fmt == "ndjson":
            objects = [json.loads(line) for line in text.split("\n") if line.strip()]
        else:
            raise ValueError(f"unknown format {fmt!r}")
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid {fmt}: {exc}") from exc
    if not isinstance(objects, list) or not all(isinstance(o, dict) for o in objects):
        raise ParseError(f"{fmt} input must hold objects")
    if not objects:
        raise EmptyInput(f"{fmt} input has no rows")
    header = list(objects[0])
    records = []
    for number, obj in enumerate(objects, start=1):
        if list(obj) != header:
            raise RaggedRow(number, len(header), len(obj))
        records.append(["" if v is None else str(v) for v in obj.values()])
    return TableData(header, records)


def format_for_path(path: str) -> str:
    ext = path.rsplit(".", 1)[-1].lower() if "." in path else ""
    if ext in ("tab", "txt"):
        return "tsv" if ext == "tab" else "csv"
    if ext in FORMATS:
        return ext
    if ext == "jsonl":
        return "ndjson"
    raise ValueError(f"cannot tell the format of {path!r} from its extension")
