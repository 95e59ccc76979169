import numpy as np
import pytest

from smoothschur import Tolerances

KINDS = ("sharp", "smooth", "nonselfadjoint")


@pytest.fixture
def tol():
    return Tolerances()


def crandn(rng, n, m=None):
    m = n if m is None else m
    return rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))
