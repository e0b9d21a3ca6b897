import pytest

from coupledfp import builtin_problem


@pytest.fixture
def averaging():
    """The 1-d averaging instance: F = (x+y)/10, g = x/2 on [0,2] x [0,3]."""
    return builtin_problem("averaging")


@pytest.fixture
def averaging2d():
    return builtin_problem("averaging-2d")


@pytest.fixture
def three_point():
    return builtin_problem("three-point")
