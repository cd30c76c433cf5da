import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

CRITERIA: list[str] = []


@pytest.fixture
def record():
    """Log one pass/fail line per acceptance criterion for the summary."""

    def _record(label: str, passed: bool, detail: str) -> None:
        CRITERIA.append(f"{'PASS' if passed else 'FAIL'}  {label}: {detail}")

    return _record


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in CRITERIA:
            terminalreporter.write_line(line)
