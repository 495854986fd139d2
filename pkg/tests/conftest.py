import numpy as np
import pytest

from mfdma import analyze, pmodel_1d


@pytest.fixture(scope="session")
def pmodel_report():
    """Backward analysis of the depth-16 p1=0.3 cascade on default grids."""
    return analyze(pmodel_1d(0.3, 16), theta=0.0, oracle_p=[0.3, 0.7])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# lines recorded by test_acceptance, echoed after the run regardless of capture
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
