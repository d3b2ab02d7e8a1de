"""Metadata translation behind a small provider interface.

The bundled :class:`GlossaryStub` is an offline, deterministic provider driven by a
tab-separated glossary (source-lang, target-lang, source phrase, target phrase).
Live machine-translation services plug in through :class:`TranslationProvider`.
"""
from __future__ import annotations

import dataclasses
import hashlib
import logging
import os
import re
import tempfile
import threading
from importlib import resources
from pathlib import Path
from typing import Iterable, Protocol

from .errors import UnsupportedPair
from .models import ItemRecord, MetadataField

logger = logging.getLogger(__name__)

TRANSLATABLE_KEYS = ("dc.title", "dc.subject", "dc.description")
_WORD = re.compile(r"\w+")


class TranslationProvider(Protocol):
    name: str
    capability: frozenset[tuple[str, str]]

    def translate(self, text: str, source: str, target: str) -> str: ...


class GlossaryStub:
    """Longest-match phrase substitution; unknown words pass through unchanged."""

    def __init__(self, entries: dict[tuple[str, str, tuple[str, ...]], str], name: str = "glossary"):
        self.name = name
        self.entries = dict(entries)
        self.capability = frozenset((s, t) for s, t, _ in self.entries)
        self._longest = max((len(p) for _, _, p in self.entries), default=0)
        self._lock = threading.Lock()
        self.calls = 0

    @classmethod
    def from_file(cls, path, name: str = "glossary") -> "GlossaryStub":
        return cls(parse_glossary(Path(path).read_text(encoding="utf-8")), name=name)

    @classmethod
    def bundled(cls) -> "GlossaryStub":
        text = (resources.files("odrk") / "data" / "glossary.tsv").read_text(encoding="utf-8")
        return cls(parse_glossary(text))

    def translate(self, text: str, source: str, target: str) -> str:
        if (source, target) not in self.capability:
            raise UnsupportedPair(self.name, source, target)
        with self._lock:
            self.calls += 1
        words = list(_WORD.finditer(text))
        out: list[str] = []
        cursor = 0
        i = 0
        while i < len(words):
            hit = None
            for size in range(min(self._longest, len(words) - i), 0, -1):
                span = words[i:i + size]
                # phrases only match across plain whitespace
                if any(text[a.end():b.start()].strip() for a, b in zip(span, span[1:])):
                    continue
                key = (source, target, tuple(w.group().lower() for w in span))
                if key in self.entries:
                    hit = (size, self.entries[key])
                    break
            if hit is None:
                i += 1
                continue
            size, replacement = hit
            out.append(text[cursor:words[i].start()])
            out.append(replacement)
            cursor = words[i + size - 1].end()
            i += size
        out.append(text[cursor:])
        return "".join(out)


def parse_glossary(text: str) -> dict[tuple[str, str, tuple[str, ...]], str]:
    entries = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 4:
            raise ValueError(f"glossary line {lineno}: expected 4 tab-separated fields")
        source, target, phrase, translation = (p.strip() for p in parts)
        words = tuple(w.lower() for w in _WORD.findall(phrase))
        if not words:
            raise ValueError(f"glossary line {lineno}: empty source phrase")
        entries[(source, target, words)] = translation
    return entries


class TranslationCache:
    """On-disk cache at ``<root>/translations/<provider>/<source>-<target>/<sha256>.txt``."""

    def __init__(self, root):
        self.root = Path(root) / "translations"
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def path(self, provider: str, source: str, target: str, text: str) -> Path:
        digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
        return self.root / provider / f"{source}-{target}" / f"{digest}.txt"

    def get(self, provider: str, source: str, target: str, text: str) -> str | None:
        path = self.path(provider, source, target, text)
        try:
            value = path.read_bytes().decode("utf-8")
        except FileNotFoundError:
            with self._lock:
                self.misses += 1
            return None
        with self._lock:
            self.hits += 1
        return value

    def put(self, provider: str, source: str, target: str, text: str, value: str) -> None:
        path = self.path(provider, source, target, text)
        with self._lock:
            if path.exists():
                return
            path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-")
            with os.fdopen(fd, "wb") as fh:
                fh.write(value.encode("utf-8"))
            os.replace(tmp, path)


def translate_text(
    provider: TranslationProvider,
    text: str,
    source: str,
    target: str,
    cache: TranslationCache | None = None,
) -> str:
    if not text:
        raise ValueError("text must be non-empty")
    if source == target:
        return text
    if (source, target) not in provider.capability:
        raise UnsupportedPair(provider.name, source, target)
    if cache is not None:
        cached = cache.get(provider.name, source, target, text)
        if cached is not None:
            return cached
    value = provider.translate(text, source, target)
    if cache is not None:
        cache.put(provider.name, source, target, text, value)
    return value


def translate_records(
    provider: TranslationProvider,
    items: Iterable[ItemRecord],
    target: str,
    cache: TranslationCache | None = None,
) -> tuple[list[ItemRecord], list[str]]:
    """Append a translated copy of every title/subject/description not already in ``target``.

    Originals are kept. Per-field failures become warnings.
    """
    out, warnings = [], []
    for item in items:
        added = []
        present = {(f.key, f.value, f.language, f.translated_from) for f in item.metadata}
        for f in item.metadata:
            if f.key not in TRANSLATABLE_KEYS or f.translated_from is not None:
                continue
            if f.language is None:
                warnings.append(f"{item.server}/{item.handle}: {f.key} has no language, not translated")
                continue
            if f.language == target or not f.value:
                continue
            try:
                value = translate_text(provider, f.value, f.language, target, cache)
            except UnsupportedPair as exc:
                warnings.append(f"{item.server}/{item.handle}: {f.key}: {exc}")
                continue
            new = MetadataField(f.key, value, language=target, translated_from=f.language)
            sig = (new.key, new.value, new.language, new.translated_from)
            if sig not in present:
                present.add(sig)
                added.append(new)
        out.append(dataclasses.replace(item, metadata=item.metadata + tuple(added)) if added else item)
    for w in warnings:
        logger.info(w)
    return out, warnings
