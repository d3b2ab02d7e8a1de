import pytest

from odrk.mockrepo import FixtureSet, bundled_fixture, serve_fixtures
from odrk.models import BitstreamRef, ItemRecord, MetadataField, RepositoryEndpoint

DEPOSITONCE = "depositonce-fixture"
REFUBIUM = "refubium-fixture"
HUNDRED = bytes(range(100))


def endpoint_for(server, name=None, **kw) -> RepositoryEndpoint:
    return RepositoryEndpoint(name=name or server.fixture.name, base_url=server.url, timeout_seconds=5, **kw)


@pytest.fixture(scope="session")
def depositonce():
    with serve_fixtures(bundled_fixture(DEPOSITONCE)) as server:
        yield server


@pytest.fixture(scope="session")
def refubium():
    with serve_fixtures(bundled_fixture(REFUBIUM)) as server:
        yield server


@pytest.fixture(scope="session")
def depositonce_norange():
    with serve_fixtures(bundled_fixture(DEPOSITONCE, range_supported=False)) as server:
        yield server


@pytest.fixture(scope="session")
def refubium_norange():
    with serve_fixtures(bundled_fixture(REFUBIUM, range_supported=False)) as server:
        yield server


@pytest.fixture
def do_ep(depositonce):
    return endpoint_for(depositonce)


@pytest.fixture
def rf_ep(refubium):
    return endpoint_for(refubium)


def tiny_fixture(**flags) -> FixtureSet:
    item = ItemRecord(
        id="t-1",
        handle="1234/5",
        server="tiny",
        metadata=(MetadataField("dc.title", "Hundred bytes", "en"),),
        bitstreams=(BitstreamRef("hundred.bin", 100, "application/octet-stream", "/api/bitstreams/h1/retrieve"),),
    )
    return FixtureSet(name="tiny", items=[item], files={"h1": HUNDRED}, **flags)


@pytest.fixture
def tiny():
    with serve_fixtures(tiny_fixture()) as server:
        yield server


@pytest.fixture
def tiny_norange():
    with serve_fixtures(tiny_fixture(range_supported=False)) as server:
        yield server


@pytest.fixture
def dead_endpoint():
    with serve_fixtures(tiny_fixture(fail_all=True)) as server:
        yield RepositoryEndpoint("dead", server.url, timeout_seconds=2)


ACCEPTANCE = "test_acceptance.py::test_criterion_"


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed"):
        for report in terminalreporter.stats.get(outcome, []):
            if report.when == "call" and ACCEPTANCE in report.nodeid:
                name = report.nodeid.split(ACCEPTANCE, 1)[1]
                number, _, label = name.partition("_")
                lines.append((int(number), f"criterion {number}: {outcome[:4].upper()}  {label.replace('_', ' ')}"))
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
