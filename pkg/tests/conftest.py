import pytest

from subriemann import fixtures as fx
from subriemann.fields import enumerate_commutators
from subriemann.nsw import build_nsw


@pytest.fixture(scope="session")
def systems():
    return {name: make() for name, make in fx.ALL_BUILDERS.items()}


@pytest.fixture(scope="session")
def bases(systems):
    return {name: enumerate_commutators(sys) for name, sys in systems.items()}


@pytest.fixture(scope="session")
def nsw_polys(bases):
    return {name: build_nsw(basis) for name, basis in bases.items()}


@pytest.fixture(scope="session")
def martinet(systems):
    return systems["martinet"]


@pytest.fixture(scope="session")
def grushin(systems):
    return systems["grushin-1-1-2"]
