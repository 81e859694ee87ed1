import random

import pytest

from sha5 import pipeline as pl
from sha5.descent import SearchPolicy

# acceptance criterion -> short title, in reporting order
CRITERIA = {
    "1": "curve census N=10..50",
    "2": "local-only T/U cross-tab at N=100",
    "3": "conductor filter N=100, C=10^6",
    "4": "full pipeline at N=10",
    "5": "full pipeline at N=20",
    "6": "property suites",
}

_outcomes: dict[str, list] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(n): test belongs to acceptance criterion n")
    config.addinivalue_line("markers", "slow: builds a full database")


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("acceptance")
        if m:
            item.user_properties.append(("criterion", m.args[0]))


def pytest_runtest_logreport(report):
    crit = dict(report.user_properties).get("criterion")
    if crit is None:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        _outcomes.setdefault(crit, []).append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for crit, title in CRITERIA.items():
        results = _outcomes.get(crit)
        if not results:
            tr.write_line(f"criterion {crit} ({title}): NOT RUN")
            continue
        failed = [name for name, outcome in results if outcome != "passed"]
        verdict = "PASS" if not failed else "FAIL"
        extra = f"  [failing: {', '.join(failed)}]" if failed else ""
        tr.write_line(f"criterion {crit} ({title}): {verdict} ({len(results) - len(failed)}/{len(results)}){extra}")


class Database:
    """Records, pair results and the stats report of one height bound."""

    def __init__(self, N):
        self.N = N
        self.records = pl.build_database(pl.curve_parameters(N), SearchPolicy())
        self.results = list(pl.analyze_pairs(self.records))
        self.report = pl.stats(self.records, self.results)
        self.by_uv = {(r.u, r.v): r for r in self.records}


@pytest.fixture(scope="session")
def db10():
    return Database(10)


@pytest.fixture(scope="session")
def db20():
    return Database(20)


@pytest.fixture
def rng():
    return random.Random(20240805)
