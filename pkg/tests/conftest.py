import math

import pytest

from phaseint.base import BaseSpec, make_base
from phaseint.potential import builtin, from_expression

INF = math.inf


@pytest.fixture
def airy0():
    return make_base(builtin("airy"), BaseSpec(s=0))


@pytest.fixture
def unit_base():
    """R = 1 with s = 0, so Q = 1 and every correction vanishes."""
    return make_base(from_expression("1"), BaseSpec(s=0))


@pytest.fixture
def hydrogen_langer():
    return make_base(builtin("coulomb", {"E": -0.5, "Z": 1, "l": 0}), BaseSpec(preset="kramers-langer"))
