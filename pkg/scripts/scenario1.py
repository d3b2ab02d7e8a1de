"""Walk a researcher's session against the two bundled mock repositories.

search -> datasets -> preview head/tail -> download -> convert to JSON -> describe,
each run as a separate ``odrk`` process. Exits non-zero if any step fails.
"""
import subprocess
import sys
import tempfile
from pathlib import Path

from odrk.mockrepo import bundled_fixture, serve_fixtures

HANDLE, FILE = "11303/10989.2", "name_of_file.csv"


def main():
    with tempfile.TemporaryDirectory() as tmp, \
            serve_fixtures(bundled_fixture("depositonce-fixture")) as do, \
            serve_fixtures(bundled_fixture("refubium-fixture")) as rf:
        tmp = Path(tmp)
        config = tmp / "repos.conf"
        config.write_text(
            f"name = depositonce-fixture\nbase_url = {do.url}\n\n"
            f"name = refubium-fixture\nbase_url = {rf.url}\n"
        )
        steps = [
            ["search", "temperature humidity"],
            ["datasets", HANDLE],
            ["preview", HANDLE, FILE, "--head", "5"],
            ["preview", HANDLE, FILE, "--tail", "5"],
            ["download", HANDLE, FILE, "--out", str(tmp)],
            ["convert", str(tmp / HANDLE.replace("/", "_") / FILE), "--to", "json", "--out", str(tmp / "out.json")],
            ["describe", HANDLE, FILE],
        ]
        for argv in steps:
            print("$ odrk " + " ".join(argv), flush=True)
            done = subprocess.run([sys.executable, "-m", "odrk", "--config", str(config), *argv])
            if done.returncode:
                sys.exit(done.returncode)
            print()
        print(f"converted {len((tmp / 'out.json').read_bytes())} bytes of JSON")


if __name__ == "__main__":
    main()
