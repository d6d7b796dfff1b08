import numpy as np
import pytest

from freeneg import Bipartition, CovarianceMatrix

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)


def two_mode_gamma(amplitude=1.0):
    """``amplitude * sigma_x (x) sigma_y``: maximally entangled at amplitude 1."""
    return CovarianceMatrix.from_gamma(amplitude * np.kron(SX, SY))


def two_mode_gibbs_negativity(bj):
    return np.log(2 * np.cosh(bj) / (1 + np.cosh(bj)))


def two_mode_loss_negativity(gt):
    e = np.exp(-gt)
    return 0.5 * np.log(2 * e**2 + (1 - e) ** 2 + 2 * e * np.sqrt(e**2 + (1 - e) ** 2))


def random_cut(n, rng):
    n_a = int(rng.integers(1, n))
    return Bipartition(n, tuple(sorted(rng.choice(n, size=n_a, replace=False).tolist())))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def two_mode_cut():
    return Bipartition(2, (0,))


def random_generator(n, rng, n_jumps=None, scale=1.0):
    """Random quadratic Hamiltonian plus linear jump operators."""
    from freeneg import LindbladGenerator, QuadraticHamiltonian

    k = rng.normal(size=(2 * n, 2 * n))
    h = QuadraticHamiltonian(0.25 * scale * (k - k.T))
    m = n if n_jumps is None else n_jumps
    lc = 0.5 * scale * (rng.normal(size=(m, 2 * n)) + 1j * rng.normal(size=(m, 2 * n)))
    return LindbladGenerator.from_jump_operators(h, lc)
