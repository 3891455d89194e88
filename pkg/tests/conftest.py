import pytest

_LINES: list[str] = []


class AcceptanceLog:
    def record(self, criterion: str, ok: bool, detail: str) -> None:
        line = f"{'PASS' if ok else 'FAIL'}  criterion {criterion}: {detail}"
        _LINES.append(line)
        print(line)
        assert ok, line

    def skip(self, criterion: str, reason: str) -> None:
        _LINES.append(f"SKIP  criterion {criterion}: {reason}")
        pytest.skip(reason)


@pytest.fixture
def acceptance():
    return AcceptanceLog()


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
