import numpy as np
import pytest

from anovex import FgmCase


@pytest.fixture(scope="session")
def fgm_case():
    return FgmCase(rho=0.5)


@pytest.fixture(scope="session")
def fgm_sample_100k(fgm_case):
    """One large draw shared by the slower distributional checks."""
    return fgm_case.sample(100_000, seed=7)


@pytest.fixture(scope="session")
def gauss_legendre_64():
    """64-node Gauss-Legendre rule on [-1, 1], exact through degree 127."""
    return np.polynomial.legendre.leggauss(64)
