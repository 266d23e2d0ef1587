import numpy as np
import pytest

from homc.fixtures import get_fixture


def _fx(name):
    return get_fixture(name).tensor


@pytest.fixture
def irreducible_not_ergodic():
    return _fx("s4_irreducible_not_ergodic")


@pytest.fixture
def regular_reducible():
    return _fx("s4_regular_reducible")


@pytest.fixture
def four_state():
    return _fx("s4_four_state")


@pytest.fixture
def no_recurrent():
    return _fx("s5_no_recurrent")


@pytest.fixture
def two_state():
    return _fx("s5_two_state")


@pytest.fixture
def class_mixed():
    return _fx("s5_class_mixed")


@pytest.fixture
def uniform():
    return np.full((3, 3, 3), 1 / 3)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number])
