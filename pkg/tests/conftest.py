import math

import numpy as np
import pytest

from seqdi.protocol import chsh, wooltorton


@pytest.fixture
def chsh_pi8():
    return chsh(math.pi / 8)


@pytest.fixture
def woolt_pi6():
    return wooltorton(math.pi / 6, 0.3)


def random_matrix(rng, n, m=None):
    m = n if m is None else m
    return rng.normal(size=(n, m)) + 1j * rng.normal(size=(n, m))


@pytest.fixture
def rng():
    return np.random.default_rng(20241015)
