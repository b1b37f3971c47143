"""Shared fixtures; collects one PASS/FAIL line per acceptance criterion and prints them at the end."""
import pytest

ACCEPTANCE_LINES = []


def record_criterion(number: int, ok: bool, detail: str) -> str:
    line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'} -- {detail}"
    print(line, flush=True)
    ACCEPTANCE_LINES.append((number, line))
    return line


@pytest.fixture
def criterion():
    """``criterion(n, ok, detail)`` records the line and fails the test when ``ok`` is false."""
    def check(number, ok, detail):
        line = record_criterion(number, bool(ok), detail)
        assert ok, line
    return check


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)
