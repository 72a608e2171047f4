import pytest

from serialdell.corpus import load_algebra


@pytest.fixture(scope="session")
def two_loops():
    return load_algebra("two_loops")


@pytest.fixture(scope="session")
def pentagon():
    return load_algebra("pentagon_tail")


@pytest.fixture(scope="session")
def pentagon_op(pentagon):
    return pentagon.opposite()
