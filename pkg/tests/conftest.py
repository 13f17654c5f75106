"""Shared fixtures and the acceptance summary printed at the end of a run."""

import pytest

#: Lines recorded by tests/test_acceptance.py, echoed in the terminal summary.
ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_log():
    """Return a recorder ``log(number, title, ok, seconds, detail)``; prints one line per call."""

    def log(number, title, ok, seconds, detail=""):
        status = "PASS" if ok else "FAIL"
        line = f"[{status}] criterion {number}: {title} ({seconds:.2f} s){' - ' + detail if detail else ''}"
        print(line)
        ACCEPTANCE_LINES.append(line)
        return ok

    return log


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
