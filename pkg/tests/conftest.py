import random

import pytest

from comonoid.constructions import down_up_union
from comonoid.core import GroundSet


@pytest.fixture
def rng():
    return random.Random(20240517)


@pytest.fixture
def ground3():
    return GroundSet(3)


@pytest.fixture
def down_up3():
    return down_up_union(3)
