import numpy as np
import pytest

from qbattery.models import ModelParams1Q, ModelParams2Q, build_1q, build_2q, build_thermal_1q


def random_density(rng, n, rank=None):
    rank = rank or n
    g = rng.normal(size=(n, rank)) + 1j * rng.normal(size=(n, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho)


def random_hermitian(rng, n, scale=1.0):
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return scale * (g + g.conj().T) / 2


@pytest.fixture
def rng():
    return np.random.default_rng(20231015)


@pytest.fixture
def p1q():
    return ModelParams1Q(h=1.0, a=1.0, tau=1.0, hbar=1.0, beta=1.0)


@pytest.fixture
def p2q():
    return ModelParams2Q(h=0.6, J=1.0, Jp=1.0, tau=1.0, hbar=1.0, beta=1.0)


@pytest.fixture
def model_1q(p1q):
    return build_1q(p1q)


@pytest.fixture
def model_thermal(p1q):
    return build_thermal_1q(p1q)


@pytest.fixture
def model_2q(p2q):
    return build_2q(p2q)
