"""Repository configuration file.

Plain text, one repository per block, blocks separated by blank lines::

    # comment lines start with '#'
    name = depositonce-fixture
    base_url = http://127.0.0.1:8765
    flavor = fixture
    timeout_seconds = 30

Optional per-repository keys: ``auth_token``, ``search_path``, ``item_path``.
A block without ``name`` holds settings: ``cache_root`` and ``default_format``.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

from .models import RepositoryEndpoint

CONFIG_ENV = "ODRK_CONFIG"
CACHE_ENV = "ODRK_CACHE"
OUTPUT_FORMATS = ("table", "json", "csv")

REPO_KEYS = {"name", "base_url", "flavor", "timeout_seconds", "auth_token", "search_path", "item_path"}
SETTINGS_KEYS = {"cache_root", "default_format"}


class ConfigError(ValueError):
    pass


@dataclass
class CliConfig:
    repositories: list[RepositoryEndpoint] = field(default_factory=list)
    cache_root: Path = field(default_factory=lambda: default_cache_root())
    default_format: str = "table"

    def select(self, names: list[str] | None) -> list[RepositoryEndpoint]:
        if not names:
            return list(self.repositories)
        by_name = {r.name: r for r in self.repositories}
        missing = [n for n in names if n not in by_name]
        if missing:
            raise ConfigError(f"unknown repositories: {', '.join(missing)}")
        return [by_name[n] for n in names]


def default_cache_root() -> Path:
    if os.environ.get(CACHE_ENV):
        return Path(os.environ[CACHE_ENV])
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return Path(base) / "odrk"


def _blocks(text: str):
    block: list[tuple[int, str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            if block:
                yield block
                block = []
            continue
        if line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        block.append((lineno, key.strip(), value.strip()))
    if block:
        yield block


def parse_config(text: str) -> CliConfig:
    config = CliConfig()
    seen: set[str] = set()
    for block in _blocks(text):
        fields: dict[str, str] = {}
        for lineno, key, value in block:
            if key in fields:
                raise ConfigError(f"line {lineno}: duplicate key {key!r}")
            fields[key] = value
        first_line = block[0][0]
        if "name" not in fields:
            unknown = set(fields) - SETTINGS_KEYS
            if unknown:
                raise ConfigError(f"block at line {first_line}: unknown keys {sorted(unknown)}")
            if "cache_root" in fields and not os.environ.get(CACHE_ENV):
                config.cache_root = Path(fields["cache_root"]).expanduser()
            if "default_format" in fields:
                if fields["default_format"] not in OUTPUT_FORMATS:
                    raise ConfigError(f"default_format must be one of {OUTPUT_FORMATS}")
                config.default_format = fields["default_format"]
            continue
        unknown = set(fields) - REPO_KEYS
        if unknown:
            raise ConfigError(f"block at line {first_line}: unknown keys {sorted(unknown)}")
        if "base_url" not in fields:
            raise ConfigError(f"block at line {first_line}: base_url is required")
        name = fields["name"]
        if name in seen:
            raise ConfigError(f"repository name {name!r} used twice")
        seen.add(name)
        paths = {k[: -len("_path")]: fields[k] for k in ("search_path", "item_path") if k in fields}
        try:
            endpoint = RepositoryEndpoint(
                name=name,
                base_url=fields["base_url"],
                flavor=fields.get("flavor", "fixture"),
                timeout_seconds=float(fields.get("timeout_seconds", 30)),
                auth_token=fields.get("auth_token") or None,
                paths=paths,
            )
        except ValueError as exc:
            raise ConfigError(f"block at line {first_line}: {exc}") from exc
        config.repositories.append(endpoint)
    return config


def load_config(path: str | os.PathLike | None = None) -> CliConfig:
    path = path or os.environ.get(CONFIG_ENV)
    if not path:
        return CliConfig()
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text)
