"""Shared pytest plumbing: the acceptance suite records one pass/fail line
per criterion and this hook prints them after the run, outside capture."""

import pytest

_ACCEPTANCE_LINES: list[str] = []


def record_acceptance(line: str) -> None:
    _ACCEPTANCE_LINES.append(line)


@pytest.fixture
def criterion():
    """Record `criterion N: PASS/FAIL — detail` and assert the outcome."""

    def check(num: int, ok: bool, detail: str) -> None:
        status = "PASS" if ok else "FAIL"
        record_acceptance(f"criterion {num}: {status} - {detail}")
        assert ok, f"criterion {num} failed: {detail}"

    return check


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
