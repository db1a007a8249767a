import numpy as np
import pytest

from sudsqueeze.basis import gellmann_basis, spin_matrices


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def gm3():
    return gellmann_basis(3)


@pytest.fixture(scope="session")
def spin1():
    return spin_matrices(3)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
