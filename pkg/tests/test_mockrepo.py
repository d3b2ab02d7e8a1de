import json

import pytest
import requests

from odrk.errors import BindFailure, Unreachable
from odrk.mockrepo import _parse_range, bundled_fixture, load_fixture, match_items, serve_fixtures
from odrk.models import ItemRecord, MetadataField
from odrk.repo_client import get_item, search_repository

from conftest import DEPOSITONCE, HUNDRED, REFUBIUM, endpoint_for, tiny_fixture
from oracles import raw_file, raw_items

GARDEN = ItemRecord(
    "x", "1/1", "s", (MetadataField("dc.title", "Temperature and Humidity Measurements in Gardens", "en"),)
)


@pytest.mark.parametrize(
    "query,hit",
    [("temperature humidity", True), ("temperature zzz", False), ("TEMPERATURE", True), ("gardens measure", True)],
)
def test_match_items(query, hit):
    assert (match_items(query, [GARDEN]) == [GARDEN]) is hit


def test_only_searchable_fields_are_matched():
    item = ItemRecord("x", "1/2", "s", (MetadataField("dc.contributor.author", "Temperature, T."),))
    assert match_items("temperature", [item]) == []


def test_bundled_corpus_shape():
    do, rf = bundled_fixture(DEPOSITONCE), bundled_fixture(REFUBIUM)
    assert len(do.items) + len(rf.items) >= 12
    assert do.item_by_handle("11303/10989.2").bitstream("name_of_file.csv") is not None
    assert any(f.language == "de" for i in do.items + rf.items for f in i.metadata)


@pytest.mark.parametrize("server", [DEPOSITONCE, REFUBIUM])
def test_search_endpoint_defers_to_pure_function(server, request):
    srv = request.getfixturevalue("depositonce" if server == DEPOSITONCE else "refubium")
    for query in ["temperature", "climate change", "soil", "Humidity and Temperature", "zzz"]:
        body = requests.get(f"{srv.url}/api/search", params={"query": query}, timeout=5).json()
        expected = [i.to_wire() for i in match_items(query, srv.fixture.items)]
        assert body == {"items": expected}


def test_served_bytes_equal_fixture_files(depositonce):
    for raw in raw_items(DEPOSITONCE):
        for b in raw["bitstreams"]:
            got = requests.get(depositonce.url + b["retrieveLink"], timeout=5).content
            assert got == raw_file(DEPOSITONCE, b["retrieveLink"])
            assert len(got) == b["sizeBytes"]


def test_item_endpoint_404_shape(depositonce):
    r = requests.get(f"{depositonce.url}/api/items/11303/0", timeout=5)
    assert r.status_code == 404 and r.json() == {"error": "not_found"}


def test_range_switch(tiny, tiny_norange):
    url = "/api/bitstreams/h1/retrieve"
    r = requests.get(tiny.url + url, headers={"Range": "bytes=0-9"}, timeout=5)
    assert r.status_code == 206 and r.content == HUNDRED[:10]
    assert r.headers["Content-Range"] == "bytes 0-9/100"
    r = requests.get(tiny_norange.url + url, headers={"Range": "bytes=0-9"}, timeout=5)
    assert r.status_code == 200 and r.content == HUNDRED


def test_fail_all_means_unreachable():
    with serve_fixtures(tiny_fixture(fail_all=True)) as server:
        with pytest.raises(Unreachable):
            get_item(endpoint_for(server), "1234/5")


def test_bind_failure(tiny):
    port = int(tiny.url.rsplit(":", 1)[1])
    with pytest.raises(BindFailure):
        serve_fixtures(tiny_fixture(), port=port)


@pytest.mark.parametrize(
    "header,total,span",
    [
        ("bytes=0-9", 100, (0, 9)),
        ("bytes=90-200", 100, (90, 99)),
        ("bytes=95-", 100, (95, 99)),
        ("bytes=-5", 100, (95, 99)),
        ("bytes=100-120", 100, None),
        ("bytes=5-2", 100, None),
        ("bytes=-", 100, None),
        ("items=0-1", 100, None),
    ],
)
def test_parse_range(header, total, span):
    assert _parse_range(header, total) == span


def test_fixture_validation_catches_size_mismatch(tmp_path):
    fx = tiny_fixture()
    item = fx.items[0].to_wire()
    item["bitstreams"][0]["sizeBytes"] = 99
    (tmp_path / "files").mkdir()
    (tmp_path / "files" / "h1").write_bytes(HUNDRED)
    (tmp_path / "items.json").write_text(json.dumps({"name": "bad", "items": [item]}))
    with pytest.raises(ValueError, match="sizeBytes"):
        load_fixture(tmp_path)


def test_shuffle_changes_order_not_content():
    fx = bundled_fixture(DEPOSITONCE, shuffle=True, seed=3)
    with serve_fixtures(fx) as server:
        orders = set()
        for _ in range(10):
            body = requests.get(f"{server.url}/api/search", params={"query": "temperature"}, timeout=5).json()
            orders.add(tuple(i["id"] for i in body["items"]))
        assert len(orders) > 1
        assert len({tuple(sorted(o)) for o in orders}) == 1
        ids = [i.id for i in search_repository(endpoint_for(server), "temperature")]
        assert ids == sorted(ids)
