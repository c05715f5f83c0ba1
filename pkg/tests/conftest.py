import pytest

from moontrace.cmnum import PrecisionContext


@pytest.fixture(scope="session")
def ctx():
    return PrecisionContext()


_ACCEPTANCE: dict[int, str] = {}


def record_acceptance(num: int, title: str, ok: bool, seconds: float, detail: str = ""):
    line = f"criterion {num} [{title}]: {'PASS' if ok else 'FAIL'} ({seconds:.2f}s){' - ' + detail if detail else ''}"
    _ACCEPTANCE[num] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(_ACCEPTANCE):
            terminalreporter.write_line(_ACCEPTANCE[k])
