"""Fan a query out over several repositories and merge into one result table."""
from __future__ import annotations

import csv
import io
import json
import logging
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import astuple, dataclass

from .errors import EmptyQuery, NoRepositories, OdrkError
from .models import ItemRecord, RepositoryEndpoint
from .repo_client import search_repository

logger = logging.getLogger(__name__)

COLUMNS = ("id", "server", "language", "title", "author", "year", "files")
AUTHOR_KEY = "dc.contributor.author"
AUTHOR_SEP = "; "
LANGUAGE_SEP = ","


@dataclass(frozen=True)
class ResultRow:
    id: str
    server: str
    language: str
    title: str
    author: str
    year: str
    files: str

    def as_dict(self) -> dict[str, str]:
        return dict(zip(COLUMNS, astuple(self)))


@dataclass(frozen=True)
class ResultTable:
    rows: tuple[ResultRow, ...]
    columns: tuple[str, ...] = COLUMNS

    def to_json(self) -> str:
        return json.dumps([r.as_dict() for r in self.rows], ensure_ascii=False)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        writer.writerows(astuple(r) for r in self.rows)
        return buf.getvalue()

    def to_text(self) -> str:
        return render_aligned([c.upper() for c in self.columns], [astuple(r) for r in self.rows])


def render_aligned(header, rows) -> str:
    """Left-aligned columns separated by two spaces, no trailing blanks."""
    rows = [[_one_line(c) for c in row] for row in rows]
    widths = [len(h) for h in header]
    for row in rows:
        widths = [max(w, len(c)) for w, c in zip(widths, row)]
    lines = []
    for row in [list(header)] + rows:
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    return "\n".join(lines) + "\n"


def _one_line(cell: str) -> str:
    return cell.replace("\r\n", " ").replace("\n", " ").replace("\r", " ")


def federated_search(
    endpoints: list[RepositoryEndpoint],
    query: str,
    translate_to: str | None = None,
    provider=None,
    cache=None,
) -> tuple[list[ItemRecord], list[str]]:
    """Search every endpoint concurrently.

    Returns items deduplicated on (server, id) and sorted by (server, id), plus one
    warning per repository that could not be searched. With ``translate_to``, the
    items are passed through :func:`odrk.translation.translate_records` using
    ``provider`` (the bundled glossary stub when omitted).
    """
    if not endpoints:
        raise NoRepositories("no repositories configured")
    if not query or not query.strip():
        raise EmptyQuery("query is blank")

    warnings: list[str] = []
    merged: dict[tuple[str, str], ItemRecord] = {}
    with ThreadPoolExecutor(max_workers=min(8, len(endpoints))) as pool:
        futures = [(ep, pool.submit(search_repository, ep, query)) for ep in endpoints]
        for endpoint, future in futures:
            try:
                found = future.result()
            except OdrkError as exc:
                msg = f"repository {endpoint.name} skipped: {exc}"
                logger.info(msg)
                warnings.append(msg)
                continue
            for item in found:
                merged.setdefault((item.server, item.id), item)
    items = [merged[k] for k in sorted(merged)]

    if translate_to:
        from .translation import GlossaryStub, translate_records

        provider = provider or GlossaryStub.bundled()
        items, more = translate_records(provider, items, translate_to, cache=cache)
        warnings.extend(more)
    return items, warnings


def files_summary(item: ItemRecord) -> str:
    total = len(item.bitstreams)
    if not total:
        return "0"
    counts = Counter(b.extension or "noext" for b in item.bitstreams)
    inner = ", ".join(f"{ext}:{counts[ext]}" for ext in sorted(counts))
    return f"{total} ({inner})"


def to_row(item: ItemRecord, prefer_language: str | None = None) -> ResultRow:
    languages = sorted({f.language for f in item.metadata if f.language})
    issued = item.first("dc.date.issued")
    year = issued[:4] if issued[:4].isdigit() else ""
    return ResultRow(
        id=item.id,
        server=item.server,
        language=LANGUAGE_SEP.join(languages),
        title=item.first("dc.title", prefer_language),
        author=AUTHOR_SEP.join(item.values(AUTHOR_KEY)),
        year=year,
        files=files_summary(item),
    )


def to_result_table(items: list[ItemRecord], prefer_language: str | None = None) -> ResultTable:
    """One row per item, in input order. ``prefer_language`` picks which title to show."""
    return ResultTable(tuple(to_row(i, prefer_language) for i in items))


@dataclass(frozen=True)
class ValueCountTable:
    rows: tuple[tuple[str, int], ...]

    def to_json(self) -> str:
        return json.dumps([{"value": v, "count": c} for v, c in self.rows], ensure_ascii=False)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(("value", "count"))
        writer.writerows(self.rows)
        return buf.getvalue()

    def to_text(self) -> str:
        return render_aligned(["VALUE", "COUNT"], [(v, str(c)) for v, c in self.rows])


def sorted_counts(counter: Counter) -> list[tuple[str, int]]:
    return sorted(counter.items(), key=lambda kv: (-kv[1], kv[0]))


def value_counts(items: list[ItemRecord], field_key: str, top_k: int | None = None) -> ValueCountTable:
    if not field_key:
        raise ValueError("field_key must be non-empty")
    if top_k is not None and top_k <= 0:
        raise ValueError("top_k must be positive")
    counter = Counter(v for item in items for v in item.values(field_key))
    rows = sorted_counts(counter)
    if top_k is not None:
        rows = rows[:top_k]
    return ValueCountTable(tuple(rows))
