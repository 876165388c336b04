import random

import pytest

from qchar2.fields import GF2, GF4, random_value, rational_extension
from qchar2.forms import QuadraticForm, qblock, qdiag


@pytest.fixture
def rng():
    return random.Random(20240811)


def gf2t():
    return rational_extension(GF2, "t")


def gf2st():
    return rational_extension(rational_extension(GF2, "s"), "t")


def random_nonsingular(field, rng, blocks, height=1):
    """Random nonsingular form as an orthogonal sum of binary blocks."""
    q = None
    for _ in range(blocks):
        piece = qblock(field, random_value(field, rng, height), random_value(field, rng, height))
        q = piece if q is None else q.orth(piece)
    return q


def random_vector(field, rng, n, height=1):
    return tuple(random_value(field, rng, height) for _ in range(n))
