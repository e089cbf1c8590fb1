import pytest

from cglab.bcd import BcdConfig, build_delta
from cglab.groups import FreeGroup, parse_model


@pytest.fixture(scope="session")
def f2():
    return FreeGroup(2)


@pytest.fixture(scope="session")
def f3():
    return FreeGroup(3)


@pytest.fixture(scope="session")
def dinf():
    return parse_model("zm*zn:2,2")


@pytest.fixture(scope="session")
def z23():
    return parse_model("zm*zn:2,3")


@pytest.fixture(scope="session")
def delta_k2(f2):
    return build_delta(BcdConfig(f2, 2), variant_formula=True)


@pytest.fixture(scope="session")
def delta_k1(f2):
    return build_delta(BcdConfig(f2, 1))


@pytest.fixture(scope="session")
def delta_k0(f2):
    return build_delta(BcdConfig(f2, 0), variant_formula=True)
