import numpy as np
import pytest

from hybridcsd.register import total_dim

ACCEPTANCE_LINES: list[str] = []


def haar(dims, seed):
    from hybridcsd.linalg import random_unitary

    return random_unitary(total_dim(dims), seed)


def fro(A, B):
    return float(np.linalg.norm(np.asarray(A) - np.asarray(B)))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
