import pytest

_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line for an acceptance criterion and fail the test on a miss."""

    def record(label: str, failures: list[str]):
        line = f"PASS {label}" if not failures else f"FAIL {label}: {failures[0]} ({len(failures)} failures)"
        _LINES.append(line)
        print(line)
        assert not failures, line

    return record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
