import pytest

from supportvar.builders import group_algebra, sweedler


@pytest.fixture(scope="session")
def z2():
    return group_algebra(2, [2])


@pytest.fixture(scope="session")
def klein():
    return group_algebra(2, [2, 2])


@pytest.fixture(scope="session")
def z3():
    return group_algebra(3, [3])


@pytest.fixture(scope="session")
def sw3():
    return sweedler(3)
