import os

import pytest

from config import Bounds
from finite_core import new_space
from generators import make_rng


@pytest.fixture
def rng():
    return make_rng(20240611)


@pytest.fixture
def bounds():
    return Bounds()


@pytest.fixture
def witness_space():
    """Three points, two overlapping balls: S1-S4 hold, S2^c fails."""
    return new_space(3, [[0, 1], [1, 2]])


@pytest.fixture
def point_space():
    return new_space(1, [[0]])


@pytest.fixture
def corpus_dir():
    return os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "corpus")
