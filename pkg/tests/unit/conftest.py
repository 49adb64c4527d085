import pytest

from betti_regions.algebra.monomial import MonomialIdeal
from betti_regions.algebra.partition import WeightSystem
from betti_regions.polyhedral.exactlinalg import IntegerMatrix


@pytest.fixture(scope="session")
def example_matrix():
    return IntegerMatrix.from_rows([[3, 5, 8, 9], [1, 1, 1, 1]])


@pytest.fixture(scope="session")
def example_weights():
    return WeightSystem(degrees=(3, 5, 8, 9))


@pytest.fixture(scope="function")
def maximal_ideal():
    return MonomialIdeal(nvars=2, generators=((1, 0), (0, 1)))


@pytest.fixture(scope="function")
def ci23():
    # (x^2, y^3)
    return MonomialIdeal(nvars=2, generators=((2, 0), (0, 3)))


@pytest.fixture(scope="function")
def cube_powers():
    # (x^3, y^3)
    return MonomialIdeal(nvars=2, generators=((3, 0), (0, 3)))
