from pathlib import Path

import pytest

from odrk.config import ConfigError, load_config, parse_config
from odrk.models import RepositoryEndpoint, check_handle, handle_dirname
from odrk.errors import InvalidHandle

EXAMPLE = Path(__file__).resolve().parents[1] / "docs" / "repositories.conf"


def test_example_config_parses_exactly():
    config = load_config(EXAMPLE)
    assert [r.name for r in config.repositories] == ["depositonce-fixture", "refubium-fixture"]
    first = config.repositories[0]
    assert first == RepositoryEndpoint("depositonce-fixture", "http://127.0.0.1:8765", "fixture", 30.0)
    assert config.repositories[1].base_url == "http://127.0.0.1:8766"


def test_blocks_comments_and_settings(tmp_path):
    text = """
# settings block
default_format = json
cache_root = /tmp/odrk-test

name = a
base_url = https://repo.example.org
flavor = dspace-like
timeout_seconds = 12.5
auth_token = tok
search_path = /rest/find?q={query}
"""
    config = parse_config(text)
    assert config.default_format == "json"
    ep = config.repositories[0]
    assert (ep.flavor, ep.timeout_seconds, ep.auth_token) == ("dspace-like", 12.5, "tok")
    assert ep.path_template("search") == "/rest/find?q={query}"
    assert ep.path_template("item") == "/server/api/core/handles/{handle}"


@pytest.mark.parametrize(
    "text",
    [
        "name = a\nbase_url = ftp://x\n",
        "name = a\nbase_url = http://x\ntimeout_seconds = 0\n",
        "name = a\nbase_url = http://x\nflavor = other\n",
        "name = a\n",
        "name = a\nbase_url = http://x\n\nname = a\nbase_url = http://y\n",
        "name = a\nbase_url = http://x\ncolour = red\n",
        "just words\n",
        "default_format = xml\n",
    ],
)
def test_bad_configs(text):
    with pytest.raises(ConfigError):
        parse_config(text)


def test_select_unknown_repo():
    config = parse_config("name = a\nbase_url = http://x\n")
    with pytest.raises(ConfigError):
        config.select(["b"])
    assert config.select(None) == config.repositories


@pytest.mark.parametrize("handle", ["11303/10989.2", "1/a", "18452/20001"])
def test_valid_handles(handle):
    assert check_handle(handle) == handle


@pytest.mark.parametrize("handle", ["abc", "11303", "/5", "a/5", "11303/x y", "11303/x/y", ""])
def test_invalid_handles(handle):
    with pytest.raises(InvalidHandle):
        check_handle(handle)


def test_handle_dirname():
    assert handle_dirname("11303/10989.2") == "11303_10989.2"
