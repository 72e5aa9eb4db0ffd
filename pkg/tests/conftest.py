import pytest

from apollonian.core import bugeye, coins


@pytest.fixture(scope="session")
def bug():
    return bugeye()


@pytest.fixture(scope="session")
def coin():
    return coins()


_CRITERIA = []


@pytest.fixture
def criterion():
    """Record one acceptance line, then assert it."""

    def report(label, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'}  {label}: {detail}"
        _CRITERIA.append(line)
        print(line)
        assert ok, detail

    return report


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in _CRITERIA:
            terminalreporter.write_line(line)
