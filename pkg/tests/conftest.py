import numpy as np
import pytest

from riglab.hadamard import sylvester

_ACCEPTANCE: list[tuple[str, bool, str]] = []


def record_criterion(name: str, passed: bool, detail: str = "") -> None:
    _ACCEPTANCE.append((name, bool(passed), detail))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}  {detail}")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def H2():
    return sylvester(1)


@pytest.fixture(scope="session")
def H4():
    return sylvester(2)


@pytest.fixture(scope="session")
def H8():
    return sylvester(3)
