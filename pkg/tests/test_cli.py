import json

import pytest

from odrk.cli import dispatch

from conftest import DEPOSITONCE, REFUBIUM
from oracles import scan, tally
from scenario import write_config


@pytest.fixture
def config(tmp_path, depositonce, refubium, monkeypatch):
    path = tmp_path / "repos.conf"
    write_config(path, [(DEPOSITONCE, depositonce.url), (REFUBIUM, refubium.url)])
    monkeypatch.setenv("ODRK_CACHE", str(tmp_path / "cache"))
    return path


def run(capsys, *argv):
    code = dispatch(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_search_table_columns(capsys, config):
    code, out, _ = run(capsys, "--config", str(config), "search", "climate change")
    lines = out.splitlines()
    assert code == 0
    assert lines[0].split() == ["ID", "SERVER", "LANGUAGE", "TITLE", "AUTHOR", "YEAR", "FILES"]
    assert len(lines) - 1 == len(scan(DEPOSITONCE, "climate change")) + len(scan(REFUBIUM, "climate change"))


def test_search_json_is_pure(capsys, config, tmp_path):
    bad = tmp_path / "bad.conf"
    bad.write_text(config.read_text() + "\nname = gone\nbase_url = http://127.0.0.1:9\ntimeout_seconds = 1\n")
    code, out, err = run(capsys, "--config", str(bad), "search", "soil", "--format", "json")
    assert code == 0
    assert [r["id"] for r in json.loads(out)] == scan(DEPOSITONCE, "soil") + scan(REFUBIUM, "soil")
    assert "gone" in err


def test_search_translated_title(capsys, config):
    code, out, _ = run(capsys, "--config", str(config), "search", "Stadtgarten", "--translate-to", "en",
                       "--format", "csv")
    assert code == 0
    assert "temperature and humidity in the urban garden" in out


def test_value_counts(capsys, config):
    code, out, _ = run(capsys, "--config", str(config), "value-counts", "climate", "--field", "author",
                       "--top", "1", "--format", "json")
    assert code == 0
    ids = [(s, set(scan(s, "climate"))) for s in (DEPOSITONCE, REFUBIUM)]
    [(value, count)] = tally(ids, "dc.contributor.author")[:1]
    assert json.loads(out) == [{"value": value, "count": count}]


@pytest.mark.parametrize(
    "argv,code",
    [
        ([], 2),
        (["frobnicate"], 2),
        (["preview", "11303/10989.2", "name_of_file.csv"], 2),
        (["preview", "11303/10989.2", "name_of_file.csv", "--head", "0"], 2),
        (["search", "x", "--repos", "nope"], 2),
        (["value-counts", "x", "--field", "author", "--top", "0"], 2),
        (["datasets", "11303/0"], 1),
        (["datasets", "not-a-handle"], 1),
        (["preview", "11303/10989.2", "ghost.csv", "--head", "1"], 1),
        (["preview", "11303/10989.2", "documentation.pdf", "--head", "1"], 1),
        (["search", "   "], 1),
        (["datasets", "18452/20003"], 0),
    ],
)
def test_exit_codes(capsys, config, argv, code):
    got, out, err = run(capsys, "--config", str(config), *argv)
    assert got == code, err
    if code:
        assert out == "" and err


def test_missing_config(capsys, tmp_path, monkeypatch):
    monkeypatch.delenv("ODRK_CONFIG", raising=False)
    code, _, err = run(capsys, "--config", str(tmp_path / "absent.conf"), "search", "x")
    assert code == 2 and err


def test_convert_round_trip_via_cli(capsys, tmp_path):
    src = tmp_path / "in.csv"
    src.write_bytes(b'a,b\n1,"x\ny"\n')
    code, out, _ = run(capsys, "convert", str(src), "--to", "ndjson")
    assert code == 0 and out == '{"a": "1", "b": "x\\ny"}\n'
    (tmp_path / "in.ndjson").write_text(out)
    code, out, _ = run(capsys, "convert", str(tmp_path / "in.ndjson"), "--to", "csv")
    assert out == 'a,b\n1,"x\ny"\n'
    code, _, _ = run(capsys, "convert", str(tmp_path / "missing.csv"), "--to", "json")
    assert code == 1


def test_usability_command(capsys):
    from pathlib import Path

    study = Path(__file__).resolve().parents[1] / "data" / "study"
    code, out, _ = run(capsys, "usability", str(study / "sessions.csv"), "--sus", str(study / "sus_synthetic.csv"),
                       "--format", "json")
    report = json.loads(out)
    assert code == 0
    assert [t["completion_rate"] for t in report["tasks"]] == [100.0, 95.0]
    assert report["mean_sus"] == 79.6


def test_download_whole_item(capsys, config, tmp_path):
    code, out, _ = run(capsys, "--config", str(config), "download", "11303/10989.2", "--out", str(tmp_path),
                       "--format", "json")
    assert code == 0
    assert len(json.loads(out)["entries"]) == 3
