import pytest

_ACCEPTANCE: list[tuple[str, bool, str]] = []


@pytest.fixture
def acceptance():
    """Record one acceptance line: ``acceptance(criterion_id, passed, detail)``."""

    def record(cid: str, passed: bool, detail: str) -> bool:
        _ACCEPTANCE.append((cid, passed, detail))
        print(f"\n{cid}: {'PASS' if passed else 'FAIL'} - {detail}")
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for cid, passed, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{cid}: {'PASS' if passed else 'FAIL'} - {detail}")
