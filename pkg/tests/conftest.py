import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_hermitian(rng, dim):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (a + a.conj().T) / 2


def random_pure_state(rng, dim):
    psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return psi / np.linalg.norm(psi)


def random_density(rng, dim, rank=None):
    rank = rank or dim
    a = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def random_sector_state(rng, n_sites, k):
    """Pure state supported on the k-excitation sector."""
    from mebd.hilbert import excitation_sector

    sec = excitation_sector(n_sites, k)
    psi = np.zeros(1 << n_sites, dtype=np.complex128)
    amps = rng.normal(size=len(sec)) + 1j * rng.normal(size=len(sec))
    psi[sec] = amps / np.linalg.norm(amps)
    return psi


def bell_state():
    return np.array([1, 0, 0, 1], dtype=np.complex128) / np.sqrt(2)


def ghz_state(n):
    psi = np.zeros(1 << n, dtype=np.complex128)
    psi[0] = psi[-1] = 1 / np.sqrt(2)
    return psi


def w_state(n):
    psi = np.zeros(1 << n, dtype=np.complex128)
    for i in range(n):
        psi[1 << i] = 1 / np.sqrt(n)
    return psi
