import pytest

from lave.transform import power_constants


@pytest.fixture(scope="session")
def p05():
    return power_constants(0.5)


@pytest.fixture(scope="session")
def p20():
    return power_constants(2.0)
