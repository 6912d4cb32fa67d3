import pytest

from dirac_moments import PrecisionCtx

# criterion number -> (passed, summary); filled by test_acceptance.py
ACCEPTANCE: dict = {}


@pytest.fixture(scope="session")
def ctx():
    return PrecisionCtx(256)


@pytest.fixture(scope="session")
def ctx128():
    return PrecisionCtx(128)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        passed, summary = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {summary}")
