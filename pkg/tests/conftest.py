from fractions import Fraction

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("ci", max_examples=60, deadline=None)
settings.load_profile("ci")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def rational_exponents():
    """Small rationals >= 1 used across tests."""
    return [Fraction(1), Fraction(4, 3), Fraction(3, 2), Fraction(2), Fraction(5, 2), Fraction(3), Fraction(4),
            Fraction(6), Fraction(8)]
