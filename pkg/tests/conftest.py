import pytest

ACCEPTANCE = {}


@pytest.fixture
def record():
    """Record one acceptance line: record(number, passed, detail)."""

    def _record(number, passed, detail):
        ACCEPTANCE[number] = (bool(passed), detail)

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line("%s criterion %2d: %s" % ("PASS" if ok else "FAIL", k, detail))
