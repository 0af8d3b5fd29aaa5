import numpy as np
import pytest

import kobex as kx

ACCEPTANCE_LINES = []


def record_criterion(name, passed, detail=""):
    line = "[%s] %s%s" % ("PASS" if passed else "FAIL", name,
                          " -- " + detail if detail else "")
    ACCEPTANCE_LINES.append(line)
    assert passed, line


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def ball2():
    return kx.ball(2)


@pytest.fixture(scope="session")
def omega21():
    return kx.ex21_Omega()


@pytest.fixture(scope="session")
def d21():
    return kx.ex21_D()


@pytest.fixture(scope="session")
def d22():
    return kx.ex22_D()


@pytest.fixture(scope="session")
def omega22_local():
    return kx.ex22_Omega_local()


@pytest.fixture()
def rng():
    return np.random.default_rng(20240901)
