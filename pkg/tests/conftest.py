"""Collects acceptance outcomes and prints one PASS/FAIL line per criterion."""

from collections import defaultdict

import pytest

_outcomes: dict[int, list[bool]] = defaultdict(list)
_titles: dict[int, str] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion this test belongs to")


def pytest_collection_modifyitems(config, items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            item.user_properties.append(("criterion", m.args[0]))
            _titles.setdefault(m.args[0], m.args[1] if len(m.args) > 1 else "")


def pytest_runtest_logreport(report):
    crit = dict(report.user_properties).get("criterion")
    if crit is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _outcomes[crit].append(report.outcome == "passed")


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(_outcomes):
        status = "PASS" if all(_outcomes[crit]) else "FAIL"
        terminalreporter.write_line(f"AC{crit:<2} {status}  {_titles.get(crit, '')}")


@pytest.fixture
def rng_factory():
    import numpy as np

    return lambda *key: np.random.default_rng(list(key))
