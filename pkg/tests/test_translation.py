import pytest

from odrk.errors import UnsupportedPair
from odrk.models import ItemRecord, MetadataField
from odrk.repo_client import get_item
from odrk.translation import GlossaryStub, TranslationCache, parse_glossary, translate_records, translate_text

from conftest import DEPOSITONCE
from oracles import scan


@pytest.fixture
def stub():
    return GlossaryStub.bundled()


def test_phrase_examples(stub):
    assert translate_text(stub, "Temperatur und Feuchtigkeit", "de", "en") == "temperature and humidity"
    assert translate_text(stub, "Temperatur und Feuchtigkeit im Stadtgarten", "de", "en") == (
        "temperature and humidity in the urban garden")
    assert translate_text(stub, "qqq", "de", "en") == "qqq"
    assert translate_text(stub, "Temperatur, und", "de", "en") == "temperature, and"


def test_identity_and_errors(stub):
    assert translate_text(stub, "anything", "de", "de") == "anything"
    assert stub.calls == 0
    with pytest.raises(UnsupportedPair):
        translate_text(stub, "Temperatur", "de", "fr")
    with pytest.raises(ValueError):
        translate_text(stub, "", "de", "en")


def test_phrases_do_not_span_punctuation():
    s = GlossaryStub(parse_glossary("de\ten\tguten tag\thello\n"))
    assert s.translate("guten tag", "de", "en") == "hello"
    assert s.translate("guten. tag", "de", "en") == "guten. tag"


def test_bad_glossary():
    with pytest.raises(ValueError):
        parse_glossary("de\ten\tonly three\n")


def test_records_gain_translated_fields(do_ep, stub):
    item = get_item(do_ep, "11303/11200")
    [out], warnings = translate_records(stub, [item], "en")
    assert warnings == []
    assert out.metadata[: len(item.metadata)] == item.metadata
    added = out.metadata[len(item.metadata):]
    assert {f.key for f in added} == {"dc.title", "dc.subject", "dc.description"}
    assert all(f.translated_from == "de" and f.language == "en" for f in added)
    assert out.first("dc.title", "en") == "temperature and humidity in the urban garden"
    assert "climate change" in out.values("dc.subject")


def test_cache_second_run_makes_no_calls(do_ep, tmp_path):
    item = get_item(do_ep, "11303/11200")
    cache = TranslationCache(tmp_path)
    first = GlossaryStub.bundled()
    a, _ = translate_records(first, [item], "en", cache)
    assert first.calls == 3 and cache.misses == 3
    second = GlossaryStub.bundled()
    b, _ = translate_records(second, [item], "en", TranslationCache(tmp_path))
    assert second.calls == 0 and a == b
    files = list((tmp_path / "translations" / "glossary" / "de-en").glob("*.txt"))
    assert len(files) == 3


def test_field_without_language_is_warned(do_ep, stub):
    item = get_item(do_ep, "11303/11788")
    [out], warnings = translate_records(stub, [item], "en")
    assert len(warnings) == 1 and "dc.description" in warnings[0]
    assert out.first("dc.title", "en") == "precipitation and climate change in Brandenburg"


def test_unsupported_pair_is_warned(stub):
    item = ItemRecord("x", "1/1", "s", (MetadataField("dc.title", "Bonjour", "fr"),))
    [out], warnings = translate_records(stub, [item], "en")
    assert out == item and len(warnings) == 1


def test_already_translated_fields_are_not_duplicated(do_ep, stub):
    item = get_item(do_ep, "11303/11200")
    [once], _ = translate_records(stub, [item], "en")
    [twice], _ = translate_records(stub, [once], "en")
    assert twice == once


def test_federated_search_translates(do_ep, rf_ep):
    from odrk.federation import federated_search, to_result_table

    items, _ = federated_search([do_ep, rf_ep], "Temperatur", translate_to="en")
    rows = to_result_table(items, prefer_language="en").rows
    assert "humidity and temperature in indoor spaces" in {r.title for r in rows}
    # translation happens after matching, so the hit list is the untranslated one
    assert [r.id for r in rows if r.server == DEPOSITONCE] == scan(DEPOSITONCE, "Temperatur")
