import math

import numpy as np
import pytest


def exact_state(t, L):
    """Infinite-chain solution: amplitude sech(t) tanh(t)^l on level l."""
    return np.tanh(t) ** np.arange(L) / np.cosh(t)


@pytest.fixture
def log9():
    return math.log(9)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
