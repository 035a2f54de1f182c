import math

import numpy as np
import pytest

from jensentype.zoo import triangle_t

SQRT2 = math.sqrt(2.0)


@pytest.fixture(scope="session")
def tri():
    return triangle_t()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_rotation(rng, n):
    Q, R = np.linalg.qr(rng.standard_normal((n, n)))
    return Q * np.sign(np.diag(R))


# One line per acceptance criterion, printed after the run.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
