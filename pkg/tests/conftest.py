import pytest

from a1embed import new_params


@pytest.fixture(scope="session")
def p102():
    return new_params(10.0, 2)


@pytest.fixture(scope="session")
def p21():
    return new_params(2.0, 1)


@pytest.fixture(scope="session")
def p53():
    return new_params(5.0, 3)
