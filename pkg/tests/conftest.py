import re
from collections import defaultdict
from pathlib import Path

import pytest

from rogueplay.scenarios import parse

HERE = Path(__file__).parent
FIXTURES = HERE / "fixtures"
GOLDEN = HERE / "golden"

_ac_results: dict[int, list[str]] = defaultdict(list)
_AC = re.compile(r"test_acceptance\.py::test_ac(\d+)[a-z]?_")


def load_fixture(name: str):
    return parse((FIXTURES / f"{name}.scen").read_text(encoding="utf-8"))


@pytest.fixture
def fixture_spec():
    return load_fixture


def pytest_runtest_logreport(report):
    m = _AC.search(report.nodeid)
    if not m:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _ac_results[int(m.group(1))].append("skipped" if report.skipped else report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _ac_results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ac_results):
        outcomes = _ac_results[n]
        if any(o == "failed" for o in outcomes):
            verdict = "FAIL"
        elif all(o == "skipped" for o in outcomes):
            verdict = "SKIP"
        else:
            verdict = "PASS"
        terminalreporter.write_line(f"AC{n}: {verdict}")
