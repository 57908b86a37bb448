import pytest

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def verdict():
    """Record one pass/fail line per acceptance property and assert it."""

    def record(name: str, ok: bool, detail: str) -> None:
        line = f"{name}: {'PASS' if ok else 'FAIL'} ({detail})"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance verdicts")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
