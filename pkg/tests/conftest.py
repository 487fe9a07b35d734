import numpy as np
import pytest

from lightlike.presets import frame_corpus
from lightlike.structure import standard_model

# Filled by test_acceptance; echoed in the terminal summary so the
# per-criterion verdicts land in the captured test log.
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])


@pytest.fixture(scope="session")
def S5():
    return standard_model(2, (-1, 1))


@pytest.fixture(scope="session")
def S7():
    return standard_model(3, (-1, 1, 1))


@pytest.fixture(scope="session")
def corpus():
    return frame_corpus()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
