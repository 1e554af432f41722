import numpy as np
import pytest
from hypothesis import strategies as st

from braidforge.braidword import BraidWord
from braidforge.gatesets import fibonacci_gateset, majorana_gateset, target_gate

FIG3_TEXT = "s2^-2 s1^4 s2^-1 s1 s2^-1 s1 s2 s1^-2 s2 s1^-1 s2^-5 s1 s2^-1"


@pytest.fixture(scope="session")
def fib():
    return fibonacci_gateset()


@pytest.fixture(scope="session")
def maj():
    return majorana_gateset()


@pytest.fixture(scope="session")
def xgate():
    return target_gate("x-rotation")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def words(max_index=2, max_size=12, min_size=0):
    letter = st.tuples(st.integers(1, max_index), st.sampled_from([1, -1]))
    return st.lists(letter, min_size=min_size, max_size=max_size).map(lambda ls: BraidWord(tuple(ls)))


_acceptance_lines: list[str] = []


@pytest.fixture(scope="session")
def acceptance_report():
    return _acceptance_lines


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
