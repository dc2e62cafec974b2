import itertools
from pathlib import Path

import pytest

from omegaramsey import Family, LargenessParams, Subfamily

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def quads6():
    """All fifteen 4-element subsets of a 6-point universe."""
    return Family.of(6, [c for c in itertools.combinations(range(1, 7), 4)])


@pytest.fixture(scope="session")
def grid5():
    """The 7-member family over 5 points used for the decide/cr grids."""
    return Family.of(5, [{1, 2, 3}, {3, 4, 5}, {1, 4, 5}, {2, 4, 5},
                         {1, 2, 5}, {2, 3, 4}, {1, 3, 4}])


@pytest.fixture(scope="session")
def tree4():
    """The 4-member family whose pair coloring drives the tree examples."""
    return Family.of(4, [{1, 2}, {2, 3}, {3, 4}, {1, 4}])


@pytest.fixture(scope="session")
def eight5():
    """An 8-member family over 5 points for the barrier suites."""
    return Family.of(5, [{1, 2, 3}, {3, 4, 5}, {1, 4, 5}, {2, 4, 5},
                         {1, 2, 5}, {2, 3, 4}, {1, 3, 4}, {2, 3, 5}])


@pytest.fixture(scope="session")
def twelve6():
    """A 12-member family over 6 points for the reductions and the poset."""
    return Family.of(6, [
        {1, 2, 3, 4}, {1, 2, 5, 6}, {3, 4, 5, 6}, {1, 3, 5}, {2, 4, 6},
        {1, 4, 6}, {2, 3, 5}, {1, 2, 3, 5}, {1, 3, 4, 6}, {2, 4, 5, 6},
        {1, 2, 4, 6}, {1, 3, 4, 5}])


@pytest.fixture(scope="session")
def big64():
    """The 64-member family over 8 points for the batch pair-solving runs."""
    return Family.of(8, list(itertools.combinations(range(1, 9), 4))[:64])


@pytest.fixture(scope="session")
def p_grid():
    return LargenessParams(d=1, min_size=3)


@pytest.fixture(scope="session")
def p_pairs():
    return LargenessParams(d=2, min_size=3)


@pytest.fixture
def full_grid(grid5):
    return Subfamily.full(grid5)
