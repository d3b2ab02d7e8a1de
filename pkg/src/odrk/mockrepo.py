"""Fixture-backed mock repository speaking the ``fixture`` wire flavor.

Endpoints::

    GET /api/search?query=<q>          {"items": [<item>, ...]}
    GET /api/items/<prefix>/<suffix>   <item>  |  404 {"error": "not_found"}
    GET /api/bitstreams/<id>/retrieve  raw bytes, Range honoured per flags

A fixture on disk is a directory holding ``items.json`` (a search response) and
``files/<bitstream id>`` for every bitstream, the id being the path segment of
its ``retrieveLink``.

Run standalone with ``python -m odrk.mockrepo FIXTURE_DIR --port 8765``.
"""
from __future__ import annotations

import argparse
import json
import random
import re
import threading
import time
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from importlib import resources
from pathlib import Path
from urllib.parse import parse_qs, unquote, urlsplit

from .errors import BindFailure
from .models import ItemRecord, match_items

__all__ = [
    "FixtureSet",
    "MockServer",
    "bitstream_id",
    "bundled_fixture",
    "bundled_fixture_dir",
    "load_fixture",
    "match_items",
    "serve_fixtures",
]

_RETRIEVE = re.compile(r"^/api/bitstreams/([^/]+)/retrieve$")
_RANGE = re.compile(r"^bytes=(\d*)-(\d*)$")
BUNDLED = ("depositonce-fixture", "refubium-fixture")


def bitstream_id(retrieve_url: str) -> str:
    match = _RETRIEVE.match(urlsplit(retrieve_url).path)
    if not match:
        raise ValueError(f"retrieve link outside the fixture contract: {retrieve_url!r}")
    return unquote(match.group(1))


@dataclass
class FixtureSet:
    name: str
    items: list[ItemRecord]
    files: dict[str, bytes]
    range_supported: bool = True
    fail_all: bool = False
    latency_ms: int = 0
    # reorder search results and jitter latency in [0, latency_ms] per request
    shuffle: bool = False
    seed: int | None = None
    _rng: random.Random = field(init=False, repr=False)

    def __post_init__(self):
        self._rng = random.Random(self.seed)
        self.validate()

    def validate(self) -> None:
        handles = set()
        for item in self.items:
            if item.handle in handles:
                raise ValueError(f"duplicate handle {item.handle}")
            handles.add(item.handle)
            for b in item.bitstreams:
                key = bitstream_id(b.retrieve_url)
                if key not in self.files:
                    raise ValueError(f"{item.handle}: no file for bitstream {key}")
                if len(self.files[key]) != b.size_bytes:
                    raise ValueError(
                        f"{item.handle}/{b.name}: sizeBytes {b.size_bytes} != {len(self.files[key])}"
                    )

    def item_by_handle(self, handle: str) -> ItemRecord | None:
        for item in self.items:
            if item.handle == handle:
                return item
        return None


def load_fixture(path, **flags) -> FixtureSet:
    path = Path(path)
    payload = json.loads((path / "items.json").read_text(encoding="utf-8"))
    name = payload.get("name", path.name)
    items = [ItemRecord.from_wire(obj, name) for obj in payload["items"]]
    files = {}
    for item in items:
        for b in item.bitstreams:
            key = bitstream_id(b.retrieve_url)
            files[key] = (path / "files" / key).read_bytes()
    return FixtureSet(name=name, items=items, files=files, **flags)


def bundled_fixture_dir(name: str) -> Path:
    return Path(str(resources.files("odrk") / "data" / "fixtures" / name))


def bundled_fixture(name: str, **flags) -> FixtureSet:
    return load_fixture(bundled_fixture_dir(name), **flags)


class _Handler(BaseHTTPRequestHandler):
    server_version = "odrk-mock/1"
    protocol_version = "HTTP/1.1"

    @property
    def fixture(self) -> FixtureSet:
        return self.server.fixture

    def log_message(self, format, *args):
        pass

    def do_GET(self):
        fixture = self.fixture
        if fixture.fail_all:
            # drop the connection without a status line
            self.close_connection = True
            return
        delay = fixture.latency_ms
        if fixture.shuffle and delay:
            with self.server.lock:
                delay = fixture._rng.uniform(0, delay)
        if delay:
            time.sleep(delay / 1000.0)

        parts = urlsplit(self.path)
        path = parts.path
        if path == "/api/search":
            query = parse_qs(parts.query).get("query", [""])[0]
            if not query.strip():
                return self._json(400, {"error": "empty_query"})
            found = match_items(query, fixture.items)
            if fixture.shuffle:
                with self.server.lock:
                    fixture._rng.shuffle(found)
            return self._json(200, {"items": [i.to_wire() for i in found]})
        if path.startswith("/api/items/"):
            handle = unquote(path[len("/api/items/"):])
            item = fixture.item_by_handle(handle)
            if item is None:
                return self._json(404, {"error": "not_found"})
            return self._json(200, item.to_wire())
        match = _RETRIEVE.match(path)
        if match and unquote(match.group(1)) in fixture.files:
            return self._bytes(fixture.files[unquote(match.group(1))])
        return self._json(404, {"error": "not_found"})

    def _json(self, status: int, payload) -> None:
        body = json.dumps(payload, ensure_ascii=False).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _bytes(self, data: bytes) -> None:
        total = len(data)
        header = self.headers.get("Range")
        if header and self.fixture.range_supported:
            span = _parse_range(header, total)
            if span is None:
                self.send_response(416)
                self.send_header("Content-Range", f"bytes */{total}")
                self.send_header("Content-Length", "0")
                self.end_headers()
                return
            start, end = span
            body = data[start:end + 1]
            self.send_response(206)
            self.send_header("Content-Range", f"bytes {start}-{end}/{total}")
        else:
            body = data
            self.send_response(200)
        self.send_header("Accept-Ranges", "bytes" if self.fixture.range_supported else "none")
        self.send_header("Content-Type", "application/octet-stream")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)


def _parse_range(header: str, total: int) -> tuple[int, int] | None:
    """Inclusive (start, end) for a single byte-range spec, None if unsatisfiable."""
    match = _RANGE.match(header.strip())
    if not match or match.group(1) == match.group(2) == "":
        return None
    first, last = match.group(1), match.group(2)
    if first == "":
        length = int(last)
        if length == 0 or total == 0:
            return None
        return max(0, total - length), total - 1
    start = int(first)
    if start >= total:
        return None
    end = min(int(last), total - 1) if last else total - 1
    if end < start:
        return None
    return start, end


class MockServer:
    """A running mock repository; use as a context manager or call ``stop``."""

    def __init__(self, fixture: FixtureSet, host: str = "127.0.0.1", port: int = 0):
        try:
            self._httpd = ThreadingHTTPServer((host, port), _Handler)
        except OSError as exc:
            raise BindFailure(f"cannot bind {host}:{port}: {exc}") from exc
        self._httpd.daemon_threads = True
        self._httpd.fixture = fixture
        self._httpd.lock = threading.Lock()
        self.fixture = fixture
        self._thread = threading.Thread(target=self._httpd.serve_forever, daemon=True)
        self._thread.start()

    @property
    def url(self) -> str:
        host, port = self._httpd.server_address[:2]
        return f"http://{host}:{port}"

    def stop(self) -> None:
        self._httpd.shutdown()
        self._httpd.server_close()
        self._thread.join()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.stop()


def serve_fixtures(fixture: FixtureSet, host: str = "127.0.0.1", port: int = 0) -> MockServer:
    return MockServer(fixture, host, port)


def main(argv=None) -> None:
    parser = argparse.ArgumentParser(prog="python -m odrk.mockrepo", description=__doc__.splitlines()[0])
    parser.add_argument("fixture", help=f"fixture directory or a bundled name: {', '.join(BUNDLED)}")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8765)
    parser.add_argument("--no-range", action="store_true", help="ignore Range headers")
    parser.add_argument("--latency-ms", type=int, default=0)
    args = parser.parse_args(argv)
    path = bundled_fixture_dir(args.fixture) if args.fixture in BUNDLED else Path(args.fixture)
    fixture = load_fixture(path, range_supported=not args.no_range, latency_ms=args.latency_ms)
    server = serve_fixtures(fixture, args.host, args.port)
    print(f"serving {fixture.name} ({len(fixture.items)} items) at {server.url}", flush=True)
    try:
        while True:
            time.sleep(3600)
    except KeyboardInterrupt:
        server.stop()


if __name__ == "__main__":
    main()
