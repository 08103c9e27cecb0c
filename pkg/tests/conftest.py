import pytest

# criterion number -> (passed, detail); filled by tests/test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def verdict():
    """Record an acceptance outcome, then assert it."""

    def record(number: int, ok: bool, detail: str):
        # a criterion split over several tests passes only if every part does
        prev_ok, prev_detail = ACCEPTANCE.get(number, (True, ""))
        joined = f"{prev_detail}; {detail}" if prev_detail else detail
        ACCEPTANCE[number] = (prev_ok and bool(ok), joined)
        assert ok, detail

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {number:>2}: {detail}")
