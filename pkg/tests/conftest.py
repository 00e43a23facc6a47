# pylint:disable=C0103,C0114,C0115,C0116,W0621,W0402
import numpy as np
import pytest

from nncalc.config import Settings
from nncalc.galerkin import assemble_poisson_1d

from tests import RandomNetworkFactory


@pytest.fixture
def factory() -> RandomNetworkFactory:
    return RandomNetworkFactory(seed=20240611)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(7)


@pytest.fixture
def settings() -> Settings:
    return Settings()


@pytest.fixture(scope='session')
def poisson3():
    return assemble_poisson_1d(3)


@pytest.fixture(scope='session')
def poisson15():
    return assemble_poisson_1d(15)


@pytest.fixture
def rescaled_poisson3() -> np.ndarray:
    """tridiag(-1, 2, -1) of size 3"""
    return np.array([[2.0, -1.0, 0.0], [-1.0, 2.0, -1.0], [0.0, -1.0, 2.0]])
