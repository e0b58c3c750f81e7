import pytest

from gradpi.scalars import Field

# criterion label -> (passed, seconds, detail); filled by test_acceptance
ACCEPTANCE: dict = {}


@pytest.fixture(scope="session")
def Q():
    return Field.rational()


@pytest.fixture(scope="session")
def Q12():
    return Field.cyclotomic(12)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE, key=lambda k: (int(str(k).split()[0]), str(k))):
        ok, secs, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {str(k):<7} {'PASS' if ok else 'FAIL'}  {secs:6.2f}s  {detail}")
