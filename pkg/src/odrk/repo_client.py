"""HTTP client for a single repository: search, item lookup, ranged reads, downloads.

Only GET requests are ever issued. No retries; callers decide.
"""
from __future__ import annotations

import hashlib
import json
import logging
import os
import re
import tempfile
from pathlib import Path
from urllib.parse import quote

import requests

from .errors import (
    EmptyQuery,
    IoFailure,
    NoSuchFile,
    NotFound,
    ProtocolError,
    RangeUnsupported,
    Unreachable,
)
from .models import (
    HASH_NAME,
    BitstreamRef,
    ByteWindow,
    DownloadManifest,
    ItemRecord,
    ManifestEntry,
    RepositoryEndpoint,
    check_handle,
    handle_dirname,
    match_items,
)

logger = logging.getLogger(__name__)

CHUNK = 64 * 1024
MANIFEST_NAME = "manifest.json"
_CONTENT_RANGE = re.compile(r"bytes\s+(?:(\d+)-(\d+)|\*)/(\d+)")

ALL = None  # download selector meaning "every bitstream"


def _headers(endpoint: RepositoryEndpoint, extra: dict | None = None) -> dict:
    headers = {"Accept": "application/json", "User-Agent": "odrk"}
    if endpoint.auth_token:
        headers["Authorization"] = f"Bearer {endpoint.auth_token}"
    if extra:
        headers.update(extra)
    return headers


def _get(endpoint: RepositoryEndpoint, url: str, headers: dict | None = None, stream=False):
    try:
        return requests.get(
            url,
            headers=_headers(endpoint, headers),
            timeout=endpoint.timeout_seconds,
            stream=stream,
        )
    except requests.RequestException as exc:
        raise Unreachable(f"{endpoint.name}: {exc}") from exc


def _json(endpoint: RepositoryEndpoint, response) -> object:
    try:
        return response.json()
    except ValueError as exc:
        raise ProtocolError(f"{endpoint.name}: response is not JSON") from exc


def search_repository(endpoint: RepositoryEndpoint, query: str) -> list[ItemRecord]:
    """Search one repository. Results are filtered to the token-AND rule and sorted by id."""
    if not query or not query.strip():
        raise EmptyQuery("query is blank")
    path = endpoint.path_template("search").format(query=quote(query.strip(), safe=""))
    response = _get(endpoint, endpoint.url(path))
    if response.status_code != 200:
        raise ProtocolError(f"{endpoint.name}: search returned HTTP {response.status_code}")
    payload = _json(endpoint, response)
    if not isinstance(payload, dict) or not isinstance(payload.get("items"), list):
        raise ProtocolError(f"{endpoint.name}: search response lacks an items list")
    items = [ItemRecord.from_wire(obj, endpoint.name) for obj in payload["items"]]
    # a server may be looser than the documented semantics; enforce them here
    return sorted(match_items(query, items), key=lambda i: i.id)


def get_item(endpoint: RepositoryEndpoint, handle: str) -> ItemRecord:
    check_handle(handle)
    path = endpoint.path_template("item").format(handle=handle)
    response = _get(endpoint, endpoint.url(path))
    if response.status_code == 404:
        raise NotFound(f"{handle} not found on {endpoint.name}")
    if response.status_code != 200:
        raise ProtocolError(f"{endpoint.name}: item lookup returned HTTP {response.status_code}")
    item = ItemRecord.from_wire(_json(endpoint, response), endpoint.name)
    if item.handle != handle:
        raise ProtocolError(f"{endpoint.name}: asked for {handle}, got {item.handle}")
    return item


def fetch_range(
    endpoint: RepositoryEndpoint,
    bitstream: BitstreamRef,
    offset: int,
    length: int,
    fallback: bool = True,
) -> ByteWindow:
    """Read bytes ``[offset, offset+length)`` of a bitstream, clamped at the end of file.

    Sends ``Range: bytes=a-b``. A 206 reply is used as is; a 200 reply carries the
    whole body and is sliced locally when ``fallback`` is on.
    """
    if offset < 0:
        raise ValueError("offset must be >= 0")
    if length <= 0:
        raise ValueError("length must be > 0")
    url = endpoint.url(bitstream.retrieve_url)
    rng = {"Range": f"bytes={offset}-{offset + length - 1}"}
    response = _get(endpoint, url, headers=rng, stream=True)
    with response:
        if response.status_code == 206:
            match = _CONTENT_RANGE.match(response.headers.get("Content-Range", ""))
            if not match or match.group(1) is None:
                raise ProtocolError(f"{endpoint.name}: bad Content-Range on 206")
            start, total = int(match.group(1)), int(match.group(3))
            body = _read_body(endpoint, response)
            if start != offset:
                raise ProtocolError(f"{endpoint.name}: asked for offset {offset}, got {start}")
            return ByteWindow(offset, len(body), total, body)
        if response.status_code == 416:
            match = _CONTENT_RANGE.match(response.headers.get("Content-Range", ""))
            total = int(match.group(3)) if match else bitstream.size_bytes
            if offset < total:
                raise ProtocolError(f"{endpoint.name}: 416 for a satisfiable range")
            return ByteWindow(total, 0, total, b"")
        if response.status_code == 200:
            if not fallback:
                raise RangeUnsupported(f"{endpoint.name} ignored the Range header for {bitstream.name}")
            body = _read_body(endpoint, response)
            total = len(body)
            start = min(offset, total)
            chunk = body[start:start + length]
            return ByteWindow(start, len(chunk), total, chunk)
        if response.status_code == 404:
            raise NotFound(f"{bitstream.name} not retrievable from {endpoint.name}")
        raise ProtocolError(f"{endpoint.name}: retrieve returned HTTP {response.status_code}")


def _read_body(endpoint: RepositoryEndpoint, response) -> bytes:
    try:
        return response.content
    except requests.RequestException as exc:
        raise Unreachable(f"{endpoint.name}: {exc}") from exc


def fetch_all(endpoint: RepositoryEndpoint, bitstream: BitstreamRef) -> bytes:
    response = _get(endpoint, endpoint.url(bitstream.retrieve_url))
    if response.status_code == 404:
        raise NotFound(f"{bitstream.name} not retrievable from {endpoint.name}")
    if response.status_code != 200:
        raise ProtocolError(f"{endpoint.name}: retrieve returned HTTP {response.status_code}")
    return response.content


def sha256_file(path: str | os.PathLike) -> str:
    h = hashlib.new(HASH_NAME)
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(CHUNK), b""):
            h.update(block)
    return h.hexdigest()


def download(
    endpoint: RepositoryEndpoint,
    item: ItemRecord,
    selector: str | None,
    dest_dir: str | os.PathLike,
    overwrite: bool = False,
) -> DownloadManifest:
    """Save one named bitstream (or all when ``selector`` is None) under
    ``dest_dir/<handle with / -> _>/`` and write ``manifest.json`` beside them."""
    dest = Path(dest_dir)
    if not dest.is_dir():
        raise IoFailure(f"destination {dest} is not a directory")
    if selector is ALL:
        chosen = list(item.bitstreams)
    else:
        found = item.bitstream(selector)
        if found is None:
            raise NoSuchFile(f"{item.handle} has no file named {selector!r}")
        chosen = [found]

    target_dir = dest / handle_dirname(item.handle)
    try:
        target_dir.mkdir(exist_ok=True)
    except OSError as exc:
        raise IoFailure(str(exc)) from exc

    entries = []
    for bitstream in chosen:
        path = target_dir / bitstream.name
        if path.exists() and not overwrite:
            raise IoFailure(f"{path} exists; pass overwrite to replace it")
        entries.append(_save(endpoint, bitstream, path))
    manifest = DownloadManifest(item.handle, tuple(entries))
    try:
        (target_dir / MANIFEST_NAME).write_text(json.dumps(manifest.to_dict(), indent=2) + "\n")
    except OSError as exc:
        raise IoFailure(str(exc)) from exc
    return manifest


def _save(endpoint: RepositoryEndpoint, bitstream: BitstreamRef, path: Path) -> ManifestEntry:
    response = _get(endpoint, endpoint.url(bitstream.retrieve_url), stream=True)
    with response:
        if response.status_code == 404:
            raise NotFound(f"{bitstream.name} not retrievable from {endpoint.name}")
        if response.status_code != 200:
            raise ProtocolError(f"{endpoint.name}: retrieve returned HTTP {response.status_code}")
        h = hashlib.new(HASH_NAME)
        size = 0
        try:
            fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".part-")
            with os.fdopen(fd, "wb") as out:
                for block in response.iter_content(CHUNK):
                    out.write(block)
                    h.update(block)
                    size += len(block)
            os.replace(tmp, path)
        except requests.RequestException as exc:
            Path(tmp).unlink(missing_ok=True)
            raise Unreachable(f"{endpoint.name}: {exc}") from exc
        except OSError as exc:
            raise IoFailure(str(exc)) from exc
    if size != bitstream.size_bytes:
        logger.warning("%s: expected %d bytes, got %d", bitstream.name, bitstream.size_bytes, size)
    return ManifestEntry(bitstream.name, str(path), size, h.hexdigest())
