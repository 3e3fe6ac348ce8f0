import numpy as np
import pytest

from alphacap.channels import builtin_channel
from alphacap.simplex import make_channel

# lines collected by the acceptance module, echoed in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_channel(rng, n_in, n_out):
    return make_channel(rng.dirichlet(np.ones(n_out), size=n_in))


def random_point(rng, n):
    return rng.dirichlet(np.ones(n))


def bsc(eps):
    return make_channel([[1 - eps, eps], [eps, 1 - eps]])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def nakagawa5():
    return builtin_channel("nakagawa5")
