"""Regenerate the bundled mock-repository fixtures and glossary.

Deterministic: running it twice produces byte-identical output.

    python scripts/build_fixtures.py [--out src/odrk/data]
"""
from __future__ import annotations

import argparse
import json
import random
import shutil
from datetime import datetime, timedelta
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]


def csv_line(cells, delimiter=","):
    out = []
    for c in cells:
        c = str(c)
        if any(ch in c for ch in (delimiter, '"', "\n", "\r")):
            c = '"' + c.replace('"', '""') + '"'
        out.append(c)
    return delimiter.join(out)


def table(header, rows, delimiter=",", newline="\n", bom=False):
    text = newline.join(csv_line(r, delimiter) for r in [header, *rows]) + newline
    data = text.encode("utf-8")
    return (b"\xef\xbb\xbf" + data) if bom else data


def garden_climate(rng):
    start = datetime(2019, 5, 1)
    rows = []
    for h in range(240):
        t = 14 + 8 * rng.random() + (h % 24) / 6
        temp = "NA" if rng.random() < 0.03 else f"{t:.1f}"
        hum = "" if rng.random() < 0.02 else str(rng.randint(38, 92))
        rows.append([(start + timedelta(hours=h)).isoformat(), temp, hum])
    return table(["time", "temperature", "humidity"], rows)


def humidity_daily(rng):
    rows = [[f"2019-05-{d:02d}", rng.randint(45, 85), rng.choice(["sunny", "cloudy", "rain"])] for d in range(1, 11)]
    return table(["date", "mean_humidity", "weather"], rows)


def messwerte(rng):
    stations = ["Dahlem", "Tegel", "Köpenick", "Mitte"]
    rows = [[rng.choice(stations), f"2020-03-{d:02d}", f"{rng.uniform(2, 15):.2f}", rng.randint(50, 95)]
            for d in range(1, 31)]
    return table(["station", "datum", "temperatur", "feuchtigkeit"], rows, newline="\r\n")


def sensor_log(rng):
    start = datetime(2021, 1, 1)
    rows = []
    for i in range(1000):
        status = rng.choices(["ok", "ok", "ok", "drift", "null"], k=1)[0]
        rows.append([
            i + 1,
            (start + timedelta(minutes=15 * i)).isoformat(),
            f"S{rng.randint(1, 6)}",
            f"{rng.gauss(9.5, 3.2):.3f}",
            status,
        ])
    return table(["id", "timestamp", "sensor", "soil_temp", "status"], rows)


def field_notes(rng):
    phrases = [
        "Pavement radiating heat after sunset",
        'Observer noted "unusual" stillness',
        "Shade from plane trees, 2-3 K cooler",
        "Fountain running; mist drifting east",
        "Sensor housing, re-mounted",
    ]
    rows = []
    for i in range(150):
        parts = rng.sample(phrases, k=rng.randint(1, 4))
        sep = rng.choice(["\n", "; ", "\n\n", ", "])
        note = sep.join(parts)
        if i % 17 == 0:
            note += "\nLong remark:\n" + "\n".join(
                " ".join(rng.choice(phrases) for _ in range(5)) for _ in range(8)
            )
        rows.append([i + 1, f"2018-07-{(i % 28) + 1:02d}", rng.choice(["JW", "CO", "AS"]), note,
                     f"{rng.uniform(22, 36):.1f}"])
    rows[-1][3] = 'Final entry:\n"closing" remarks,\nsplit over lines'
    return table(["note_id", "date", "observer", "note", "temperature"], rows)


def survey(rng):
    comments = ["worried", "not sure", "very concerned, acts locally", "", "thinks it's exaggerated"]
    rows = [[f"R{i:03d}", rng.randint(18, 80), rng.randint(1, 5), rng.choice(comments)] for i in range(1, 61)]
    return table(["respondent", "age", "concern", "comment"], rows, delimiter="\t")


def wind(rng):
    rows = [[f"2017-11-{d:02d}T12:00:00", f"{rng.uniform(0, 22):.1f}", rng.choice(["N", "NE", "W", "SW"])]
            for d in range(1, 21)]
    return table(["time", "speed_ms", "direction"], rows)


def regen(rng):
    rows = [[y, f"{rng.uniform(480, 650):.1f}"] for y in range(1990, 2021)]
    return table(["jahr", "niederschlag_mm"], rows)


def lake_temps(rng):
    lakes = ["Wannsee", "Müggelsee", "Tegeler See"]
    rows = [[lake, m, f"{rng.uniform(-1, 3):+.2f}"] for lake in lakes for m in range(1, 13)]
    return table(["lake", "month", "anomaly_k"], rows)


def forest(rng):
    rows = [[f"P{i}", rng.choice(["pine", "oak", "beech"]), rng.randint(40, 160), f"{rng.uniform(0.1, 0.9):.2f}"]
            for i in range(1, 41)]
    return table(["plot", "species", "age_years", "drought_index"], rows)


def innen(rng):
    rows = [[f"Raum {i}", f"{rng.uniform(18, 24):.1f}", rng.randint(30, 60)] for i in range(1, 16)]
    return table(["raum", "temperatur", "luftfeuchtigkeit"], rows, bom=True)


def museum(rng):
    rows = [[f"2023-02-{d:02d}", f"{rng.uniform(17, 20):.2f}", f"{rng.uniform(45, 55):.1f}"] for d in range(1, 29)]
    return table(["date", "temperature_c", "relative_humidity"], rows)


def corpus_stats(rng):
    rows = [[y, rng.randint(100, 900), rng.randint(5, 60)] for y in range(2010, 2023)]
    return table(["year", "articles", "distinct_outlets"], rows)


def soil(rng):
    rows = [[i, f"{rng.uniform(0.05, 0.45):.3f}"] for i in range(1, 26)]
    return table(["depth_cm", "moisture"], rows)


def pdf_blob(title: str) -> bytes:
    # a tiny but well-formed-looking PDF; content is never parsed
    return f"%PDF-1.4\n% {title}\n1 0 obj << /Type /Catalog >> endobj\ntrailer << /Root 1 0 R >>\n%%EOF\n".encode()


def md(key, value, lang="en"):
    out = {"key": key, "value": value}
    if lang is not None:
        out["language"] = lang
    return out


# (id, handle, metadata, [(name, mediaType, generator)])
DEPOSITONCE = [
    ("do-0001", "11303/10989.2", [
        md("dc.title", "Temperature and Humidity Measurements in Gardens"),
        md("dc.subject", "temperature"), md("dc.subject", "climate"),
        md("dc.description", "Hourly air temperature and relative humidity logged in urban gardens."),
        md("dc.contributor.author", "Schmidt, Anna"), md("dc.contributor.author", "Weber, Jonas"),
        md("dc.date.issued", "2019-05-14"),
    ], [("name_of_file.csv", "text/csv", garden_climate),
        ("humidity_daily.csv", "text/csv", humidity_daily),
        ("documentation.pdf", "application/pdf", lambda r: pdf_blob("garden documentation"))]),
    ("do-0002", "11303/11200", [
        md("dc.title", "Temperatur und Feuchtigkeit im Stadtgarten", "de"),
        md("dc.subject", "Klimawandel", "de"),
        md("dc.description", "Messungen der Temperatur und Feuchtigkeit in Berliner Gärten", "de"),
        md("dc.contributor.author", "Schmidt, Anna"),
        md("dc.date.issued", "2020-03-31"),
    ], [("messwerte.csv", "text/csv", messwerte)]),
    ("do-0003", "11303/11315", [
        md("dc.title", "Long-term Sensor Log of Soil Temperature"),
        md("dc.subject", "soil"), md("dc.subject", "temperature"),
        md("dc.description", "Fifteen-minute soil temperature readings from six probes."),
        md("dc.contributor.author", "Keller, Lena"),
        md("dc.date.issued", "2021-06"),
    ], [("sensor_log.csv", "text/csv", sensor_log)]),
    ("do-0004", "11303/11402", [
        md("dc.title", "Field Notes on Urban Heat Islands"),
        md("dc.subject", "climate change"), md("dc.subject", "temperature"),
        md("dc.description", "Free-text observer notes with spot temperature readings."),
        md("dc.contributor.author", "Weber, Jonas"), md("dc.contributor.author", "Okafor, Chidi"),
        md("dc.date.issued", "2018-09-01"),
    ], [("field_notes.csv", "text/csv", field_notes)]),
    ("do-0005", "11303/11510", [
        md("dc.title", "Climate Change Perception Survey"),
        md("dc.subject", "climate change"),
        md("dc.description", "Questionnaire on perceived climate risk among Berlin residents."),
        md("dc.contributor.author", "Okafor, Chidi"), md("dc.contributor.author", "Schmidt, Anna"),
        md("dc.date.issued", "2022-02-11"),
    ], [("survey.tsv", "text/tab-separated-values", survey)]),
    ("do-0006", "11303/11623", [
        md("dc.title", "Wind Speed Records"),
        md("dc.subject", "wind"),
        md("dc.contributor.author", "Keller, Lena"),
    ], [("wind.csv", "text/csv", wind)]),
    ("do-0007", "11303/11788", [
        md("dc.title", "Niederschlag und Klimawandel in Brandenburg", "de"),
        md("dc.subject", "Klimawandel", "de"),
        md("dc.description", "Jahresniederschlag 1990-2020", None),
        md("dc.contributor.author", "Becker, Paul"),
        md("dc.date.issued", "2021-11-02"),
    ], [("regen.csv", "text/csv", regen)]),
    ("do-0008", "11303/11901", [
        md("dc.title", "Thesis on Humidity Control in Greenhouses"),
        md("dc.subject", "humidity"),
        md("dc.contributor.author", "Weber, Jonas"),
        md("dc.date.issued", "2016"),
    ], [("thesis.pdf", "application/pdf", lambda r: pdf_blob("greenhouse thesis"))]),
]

REFUBIUM = [
    ("rf-0001", "18452/20001", [
        md("dc.title", "Temperature Anomalies in Berlin Lakes"),
        md("dc.subject", "temperature"), md("dc.subject", "limnology"),
        md("dc.description", "Monthly surface temperature anomalies for three lakes."),
        md("dc.contributor.author", "Fischer, Marie"), md("dc.contributor.author", "Schmidt, Anna"),
        md("dc.date.issued", "2020-08-20"),
    ], [("lake_temps.csv", "text/csv", lake_temps)]),
    ("rf-0002", "18452/20002", [
        md("dc.title", "Climate Change Adaptation in Forestry"),
        md("dc.subject", "climate change"), md("dc.subject", "forestry"),
        md("dc.description", "Drought index per forest plot."),
        md("dc.contributor.author", "Fischer, Marie"),
        md("dc.date.issued", "2021-04-01"),
    ], [("forest.csv", "text/csv", forest),
        ("report.pdf", "application/pdf", lambda r: pdf_blob("forestry report"))]),
    ("rf-0003", "18452/20003", [
        md("dc.title", "Luftfeuchtigkeit und Temperatur in Innenräumen", "de"),
        md("dc.subject", "Temperatur", "de"),
        md("dc.description", "Messungen der Temperatur und Luftfeuchtigkeit", "de"),
        md("dc.contributor.author", "Braun, Lukas"),
        md("dc.date.issued", "2019-12-12"),
    ], [("innen.csv", "text/csv", innen)]),
    ("rf-0004", "18452/20004", [
        md("dc.title", "Humidity and Temperature Dataset for Museum Storage"),
        md("dc.subject", "conservation"),
        md("dc.description", "Daily temperature and humidity in a museum depot."),
        md("dc.contributor.author", "Braun, Lukas"), md("dc.contributor.author", "Okafor, Chidi"),
        md("dc.date.issued", "2023-03-05"),
    ], [("museum.csv", "text/csv", museum)]),
    ("rf-0005", "18452/20005", [
        md("dc.title", "Climate Change Discourse Corpus Statistics"),
        md("dc.subject", "climate change"), md("dc.subject", "media"),
        md("dc.contributor.author", "Yilmaz, Deniz"),
        md("dc.date.issued", "2022-10-10"),
    ], [("corpus_stats.csv", "text/csv", corpus_stats)]),
    ("rf-0006", "18452/20006", [
        md("dc.title", "Soil Moisture Monitoring"),
        md("dc.subject", "soil"),
    ], [("soil.csv", "text/csv", soil)]),
]

GLOSSARY = [
    ("de", "en", "Temperatur und Feuchtigkeit", "temperature and humidity"),
    ("de", "en", "Temperatur", "temperature"),
    ("de", "en", "Feuchtigkeit", "humidity"),
    ("de", "en", "Luftfeuchtigkeit", "humidity"),
    ("de", "en", "und", "and"),
    ("de", "en", "im", "in the"),
    ("de", "en", "in", "in"),
    ("de", "en", "Stadtgarten", "urban garden"),
    ("de", "en", "Klimawandel", "climate change"),
    ("de", "en", "Messungen der", "measurements of"),
    ("de", "en", "Messungen", "measurements"),
    ("de", "en", "der", "the"),
    ("de", "en", "Berliner", "Berlin"),
    ("de", "en", "Gärten", "gardens"),
    ("de", "en", "Niederschlag", "precipitation"),
    ("de", "en", "Innenräumen", "indoor spaces"),
    ("en", "de", "temperature and humidity", "Temperatur und Feuchtigkeit"),
    ("en", "de", "temperature", "Temperatur"),
    ("en", "de", "humidity", "Feuchtigkeit"),
    ("en", "de", "climate change", "Klimawandel"),
    ("en", "de", "and", "und"),
]


def build_server(name: str, prefix: str, items, out: Path, seed: int) -> None:
    rng = random.Random(seed)
    target = out / "fixtures" / name
    if target.exists():
        shutil.rmtree(target)
    (target / "files").mkdir(parents=True)
    wire = []
    for item_id, handle, metadata, files in items:
        bitstreams = []
        for k, (fname, media, gen) in enumerate(files, start=1):
            data = gen(rng)
            bid = f"{prefix}{item_id.split('-')[1]}-{k}"
            (target / "files" / bid).write_bytes(data)
            bitstreams.append({
                "name": fname,
                "sizeBytes": len(data),
                "mediaType": media,
                "retrieveLink": f"/api/bitstreams/{bid}/retrieve",
            })
        wire.append({"id": item_id, "handle": handle, "metadata": metadata, "bitstreams": bitstreams})
    doc = {"name": name, "items": wire}
    (target / "items.json").write_text(json.dumps(doc, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")


def main(argv=None):
    parser = argparse.ArgumentParser(description="regenerate bundled fixtures")
    parser.add_argument("--out", type=Path, default=ROOT / "src" / "odrk" / "data")
    args = parser.parse_args(argv)
    build_server("depositonce-fixture", "do", DEPOSITONCE, args.out, seed=11303)
    build_server("refubium-fixture", "rf", REFUBIUM, args.out, seed=18452)
    lines = ["# source-lang\ttarget-lang\tsource phrase\ttarget phrase"]
    lines += ["\t".join(e) for e in GLOSSARY]
    (args.out / "glossary.tsv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"fixtures written to {args.out}")


if __name__ == "__main__":
    main()
