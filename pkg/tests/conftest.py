import sys
from fractions import Fraction

import numpy as np
import pytest

from shapley_mediator import gen_example1


@pytest.fixture
def example1():
    return gen_example1()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def F(x):
    return Fraction(x)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(module.RESULTS):
        terminalreporter.write_line(module.RESULTS[number])
