import pytest

ACCEPTANCE = {}


@pytest.fixture
def criterion(request):
    """Record a one-line verdict for an acceptance criterion."""

    def record(number: int, label: str, ok: bool, detail: str = ""):
        ACCEPTANCE[number] = (label, bool(ok), detail)
        assert ok, f"criterion {number} ({label}) failed: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        label, ok, detail = ACCEPTANCE[number]
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"[{status}] {number:2d}. {label}: {detail}")
