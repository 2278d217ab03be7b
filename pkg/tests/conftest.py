from pathlib import Path

import pytest

CIRCUITS = Path(__file__).resolve().parent.parent / "circuits"

_ACCEPTANCE_LINES = []


@pytest.fixture
def circuit_dir() -> Path:
    return CIRCUITS


@pytest.fixture
def acceptance_report():
    """Record one PASS/FAIL line; the test fails on FAIL."""
    def report(passed: bool, line: str):
        _ACCEPTANCE_LINES.append(line)
        print(line)
        assert passed, line
    return report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
