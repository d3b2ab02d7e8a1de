import json
import math
import random
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from odrk.inference import InferredType
from odrk.profile import TableProfile, describe, render_profile
from odrk.tabular import TableData, parse_delimited

from oracles import fixture_tables, stdlib_parse, two_pass_profile

GOLDEN = Path(__file__).parent / "golden"


def _col(cells, name="v"):
    return TableData([name], [[c] for c in cells])


def test_small_numeric_column():
    c = describe(_col(["1", "2", "3", "4"])).column_profiles[0]
    s = c.numeric_summary
    assert c.inferred is InferredType.INTEGER
    assert (s.min, s.max, s.mean) == (1, 4, 2.5)
    assert s.std_dev == pytest.approx(1.2909944487358056, abs=1e-12)
    assert sum(n for *_, n in c.histogram) == 4


def test_missing_tokens_are_not_counted():
    c = describe(_col(["1", "NA", "", "null", "3"])).column_profiles[0]
    assert (c.count, c.missing, c.distinct) == (5, 3, 2)
    assert c.numeric_summary.mean == 2


def test_single_value_and_constant_columns():
    one = describe(_col(["5"])).column_profiles[0]
    assert one.numeric_summary.std_dev is None and one.histogram == [(5.0, 5.0, 1)]
    const = describe(_col(["2"] * 6)).column_profiles[0]
    assert const.numeric_summary.std_dev == 0 and const.histogram == [(2.0, 2.0, 6)]


def test_text_column_has_no_numbers():
    c = describe(_col(["a", "b", "a"])).column_profiles[0]
    assert c.numeric_summary is None and c.histogram is None
    assert c.top_values == [("a", 2), ("b", 1)]


def test_empty_table():
    p = describe(TableData(["a", "b"], []))
    assert p.row_count == 0
    assert [(c.count, c.missing, c.distinct) for c in p.column_profiles] == [(0, 0, 0), (0, 0, 0)]


def _assert_matches_oracle(table):
    expected = two_pass_profile(table.header, table.records)
    profile = describe(table)
    for c, e in zip(profile.column_profiles, expected):
        assert (c.name, c.count, c.missing, c.distinct) == (e["name"], e["count"], e["missing"], e["distinct"])
        assert c.top_values == e["top"]
        if c.numeric_summary is not None:
            s = c.numeric_summary
            assert (s.min, s.max) == (e["min"], e["max"])
            assert s.mean == pytest.approx(e["mean"], rel=1e-9, abs=1e-9)
            if e["std"] is None:
                assert s.std_dev is None
            else:
                assert s.std_dev == pytest.approx(e["std"], rel=1e-9, abs=1e-9)
            assert [n for *_, n in c.histogram] == e["hist"]


def test_fixture_tables_match_two_pass_reference():
    for *_, data, delim in fixture_tables():
        _assert_matches_oracle(parse_delimited(data, delim))


numeric_cell = st.one_of(
    st.integers(-10**6, 10**6).map(str),
    st.floats(-1e6, 1e6, allow_nan=False).map(repr),
    st.sampled_from(["", "NA", "null", "x", "2020-01-01"]),
)


@st.composite
def tables(draw):
    width = draw(st.integers(1, 4))
    rows = draw(st.lists(st.lists(numeric_cell, min_size=width, max_size=width), max_size=30))
    return TableData([f"c{i}" for i in range(width)], rows)


@settings(max_examples=80, deadline=None)
@given(tables())
def test_conservation(table):
    for c in describe(table).column_profiles:
        assert c.count == len(table.records)
        assert c.missing + c.present == c.count
        assert c.distinct <= c.present
        if c.histogram is not None:
            numeric = sum(1 for r in table.records if _numberish(r[int(c.name[1:])]))
            assert sum(n for *_, n in c.histogram) == numeric
            s = c.numeric_summary
            assert s.min <= s.mean <= s.max


def _numberish(cell):
    try:
        return math.isfinite(float(cell))
    except ValueError:
        return False


@settings(max_examples=40, deadline=None)
@given(tables(), st.randoms(use_true_random=False))
def test_row_order_does_not_matter(table, rnd):
    shuffled = list(table.records)
    rnd.shuffle(shuffled)
    a = describe(table).column_profiles
    b = describe(TableData(table.header, shuffled)).column_profiles
    for x, y in zip(a, b):
        assert (x.count, x.missing, x.distinct, x.top_values) == (y.count, y.missing, y.distinct, y.top_values)
        if x.histogram is not None:
            assert [n for *_, n in x.histogram] == [n for *_, n in y.histogram]
            assert x.numeric_summary.mean == pytest.approx(y.numeric_summary.mean, rel=1e-9, abs=1e-6)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-1000, 1000), min_size=2, max_size=40), st.integers(2, 9))
def test_scaling(values, k):
    base = describe(_col([str(v) for v in values])).column_profiles[0].numeric_summary
    scaled = describe(_col([str(v * k) for v in values])).column_profiles[0].numeric_summary
    assert scaled.mean == pytest.approx(base.mean * k, abs=1e-6)
    assert scaled.std_dev == pytest.approx(base.std_dev * k, rel=1e-9, abs=1e-6)


def test_json_round_trip():
    *_, data, delim = fixture_tables()[0]
    profile = describe(parse_delimited(data, delim))
    again = TableProfile.from_dict(json.loads(render_profile(profile, "json")))
    assert again == profile


def test_text_rendering_golden():
    table = parse_delimited(b"city,temp,when\nBerlin,3.5,2021-01-01\nBonn,NA,2021-01-02\nBerlin,7,2021-01-03\n")
    expected = (GOLDEN / "profile_small.txt").read_bytes()
    assert render_profile(describe(table), "text") == expected


def test_unknown_render_format():
    with pytest.raises(ValueError):
        render_profile(describe(_col(["1"])), "html")
