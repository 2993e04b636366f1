import numpy as np
import pytest

from sepfaces.tensor_core import BipartiteOperator, ProductVector


def random_hermitian(rng, d):
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return a + a.conj().T


def random_state(rng, m, n, rank=None):
    d = m * n
    rank = d if rank is None else rank
    a = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    rho = a @ a.conj().T
    return BipartiteOperator(rho / np.trace(rho).real, m, n)


def random_product(rng, m, n):
    x = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    y = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return ProductVector(x, y)


def pure(p):
    return BipartiteOperator(p.projector(), p.m, p.n)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
