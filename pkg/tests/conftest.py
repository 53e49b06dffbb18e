import pytest

from heisenlab.fields import field_make


@pytest.fixture(scope="session")
def F2():
    return field_make("prime", 2)


@pytest.fixture(scope="session")
def F3():
    return field_make("prime", 3)


@pytest.fixture(scope="session")
def F4():
    return field_make("extension", 2, 2)


@pytest.fixture(scope="session")
def F5():
    return field_make("prime", 5)


@pytest.fixture(scope="session")
def F9():
    return field_make("extension", 3, 2)


@pytest.fixture(scope="session")
def F25():
    return field_make("extension", 5, 2)


@pytest.fixture(scope="session")
def Q():
    return field_make("rationals")
