from pathlib import Path

import pytest

from graphprod.instance import load_instance

INSTANCES = Path(__file__).resolve().parent.parent / "instances"


def instance(name):
    return load_instance(str(INSTANCES / f"{name}.json"))


def family(name):
    return instance(name).family


@pytest.fixture
def load():
    return instance


_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def verdict():
    """Record one pass/fail line per acceptance criterion and assert it."""
    def record(number, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
        print(line)
        _ACCEPTANCE_LINES.append(line)
        assert ok, line
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
