import itertools

import pytest

from rmas.generators import fixture
from rmas.instance import evaluate


@pytest.fixture
def i1():
    return fixture("two-cycle")


@pytest.fixture
def i2():
    return fixture("single-edge")


@pytest.fixture
def i3():
    return fixture("blocked")


@pytest.fixture
def i4():
    return fixture("triangle")


def enumerate_opt(inst):
    """Plain itertools enumeration, independent of the vectorized oracle."""
    best, arg = -1.0, None
    for lab in itertools.product(*inst.label_lists):
        v = evaluate(inst, lab)
        if v > best:
            best, arg = v, lab
    return best, arg
