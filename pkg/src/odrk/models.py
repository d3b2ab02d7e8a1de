"""Repository data model and the JSON wire shape it travels in."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping
from urllib.parse import urlparse

from .errors import InvalidHandle, ProtocolError

HANDLE_RE = re.compile(r"^\d+/[A-Za-z0-9.]+$")
FLAVORS = ("fixture", "dspace-like")
SEARCHABLE_KEYS = ("dc.title", "dc.subject", "dc.description")

# Path templates per flavor; {query} is url-encoded, {handle} is prefix/suffix.
DEFAULT_PATHS = {
    "fixture": {
        "search": "/api/search?query={query}",
        "item": "/api/items/{handle}",
    },
    "dspace-like": {
        "search": "/server/api/discover/search?query={query}",
        "item": "/server/api/core/handles/{handle}",
    },
}


def check_handle(handle: str) -> str:
    if not isinstance(handle, str) or not HANDLE_RE.match(handle):
        raise InvalidHandle(f"not a handle: {handle!r}")
    return handle


def handle_dirname(handle: str) -> str:
    return handle.replace("/", "_")


@dataclass(frozen=True)
class RepositoryEndpoint:
    name: str
    base_url: str
    flavor: str = "fixture"
    timeout_seconds: float = 30.0
    auth_token: str | None = None
    paths: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if not self.name:
            raise ValueError("repository name must be non-empty")
        parsed = urlparse(self.base_url)
        if parsed.scheme not in ("http", "https") or not parsed.netloc:
            raise ValueError(f"base_url must be an absolute http(s) URL: {self.base_url!r}")
        if self.flavor not in FLAVORS:
            raise ValueError(f"unknown flavor {self.flavor!r}")
        if not self.timeout_seconds > 0:
            raise ValueError("timeout_seconds must be positive")

    def path_template(self, kind: str) -> str:
        return self.paths.get(kind) or DEFAULT_PATHS[self.flavor][kind]

    def url(self, path: str) -> str:
        if urlparse(path).scheme:
            return path
        return self.base_url.rstrip("/") + "/" + path.lstrip("/")


@dataclass(frozen=True)
class MetadataField:
    key: str
    value: str
    language: str | None = None
    translated_from: str | None = None

    def __post_init__(self):
        if not self.key:
            raise ValueError("metadata key must be non-empty")
        if self.translated_from is not None and self.translated_from == self.language:
            raise ValueError("translated_from must differ from language")

    def to_wire(self) -> dict:
        out: dict[str, Any] = {"key": self.key, "value": self.value}
        if self.language is not None:
            out["language"] = self.language
        if self.translated_from is not None:
            out["translatedFrom"] = self.translated_from
        return out


@dataclass(frozen=True)
class BitstreamRef:
    name: str
    size_bytes: int
    media_type: str
    retrieve_url: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("bitstream name must be non-empty")
        if self.size_bytes < 0:
            raise ValueError("size_bytes must be >= 0")

    @property
    def extension(self) -> str:
        stem, dot, ext = self.name.rpartition(".")
        return ext.lower() if dot and stem else ""

    def to_wire(self) -> dict:
        return {
            "name": self.name,
            "sizeBytes": self.size_bytes,
            "mediaType": self.media_type,
            "retrieveLink": self.retrieve_url,
        }


@dataclass(frozen=True)
class ItemRecord:
    id: str
    handle: str
    server: str
    metadata: tuple[MetadataField, ...] = ()
    bitstreams: tuple[BitstreamRef, ...] = ()

    def __post_init__(self):
        if not self.id:
            raise ValueError("item id must be non-empty")
        check_handle(self.handle)

    def values(self, key: str) -> list[str]:
        return [f.value for f in self.metadata if f.key == key]

    def first(self, key: str, language: str | None = None) -> str:
        fields = [f for f in self.metadata if f.key == key]
        if language is not None:
            preferred = [f for f in fields if f.language == language]
            fields = preferred or fields
        return fields[0].value if fields else ""

    def bitstream(self, name: str) -> BitstreamRef | None:
        for b in self.bitstreams:
            if b.name == name:
                return b
        return None

    def searchable_text(self) -> str:
        return " ".join(
            f.value for f in self.metadata if f.key in SEARCHABLE_KEYS
        ).lower()

    def to_wire(self) -> dict:
        return {
            "id": self.id,
            "handle": self.handle,
            "metadata": [f.to_wire() for f in self.metadata],
            "bitstreams": [b.to_wire() for b in self.bitstreams],
        }

    @classmethod
    def from_wire(cls, obj: Any, server: str) -> "ItemRecord":
        """Decode one wire item object, raising ProtocolError on any shape mismatch."""
        try:
            metadata = tuple(
                MetadataField(
                    key=m["key"],
                    value=str(m["value"]),
                    language=m.get("language"),
                    translated_from=m.get("translatedFrom"),
                )
                for m in obj.get("metadata", [])
            )
            bitstreams = tuple(
                BitstreamRef(
                    name=b["name"],
                    size_bytes=int(b["sizeBytes"]),
                    media_type=b.get("mediaType", "application/octet-stream"),
                    retrieve_url=b["retrieveLink"],
                )
                for b in obj.get("bitstreams", [])
            )
            return cls(
                id=str(obj["id"]),
                handle=obj["handle"],
                server=server,
                metadata=metadata,
                bitstreams=bitstreams,
            )
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise ProtocolError(f"malformed item object: {exc}") from exc


def query_tokens(query: str) -> list[str]:
    return query.lower().split()


def match_items(query: str, items: Iterable[ItemRecord]) -> list[ItemRecord]:
    """Items whose searchable text contains every lowercase whitespace token of ``query``."""
    tokens = query_tokens(query)
    return [i for i in items if all(t in i.searchable_text() for t in tokens)]


@dataclass(frozen=True)
class ByteWindow:
    offset: int
    length: int
    total_size: int
    bytes: bytes

    def __post_init__(self):
        if self.offset < 0 or self.length < 0:
            raise ValueError("offset and length must be non-negative")
        if self.length != len(self.bytes):
            raise ValueError("length must equal the byte count")
        if self.offset + self.length > self.total_size:
            raise ValueError("window extends beyond total_size")


HASH_NAME = "sha256"


@dataclass(frozen=True)
class ManifestEntry:
    name: str
    path: str
    size_bytes: int
    checksum: str


@dataclass(frozen=True)
class DownloadManifest:
    item_handle: str
    entries: tuple[ManifestEntry, ...]
    hash_name: str = HASH_NAME

    def to_dict(self) -> dict:
        return {
            "hash": self.hash_name,
            "item_handle": self.item_handle,
            "entries": [
                {"name": e.name, "path": e.path, "size_bytes": e.size_bytes, "checksum": e.checksum}
                for e in self.entries
            ],
        }
