import numpy as np
import pytest

from mpsvqe import hamio
from mpsvqe.mps import MPS


@pytest.fixture(scope="session")
def h4():
    return hamio.load(hamio.builtin_fixture("h4_sto3g"))


@pytest.fixture(scope="session")
def h2():
    return hamio.load(hamio.builtin_fixture("h2_sto3g"))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_mps(rng, n, chi=3, real=False):
    """Random unnormalized MPS with bond dimensions capped at chi."""
    tensors = []
    dl = 1
    for k in range(n):
        dr = min(chi, 2 ** (k + 1), 2 ** (n - 1 - k))
        shape = (dl, 2, dr)
        t = rng.standard_normal(shape).astype(complex)
        if not real:
            t = t + 1j * rng.standard_normal(shape)
        tensors.append(t)
        dl = dr
    return MPS(tensors, max_bond=chi)


def random_hamiltonian(rng, n, n_terms):
    from mpsvqe.pauli import Hamiltonian
    terms = [(float(rng.standard_normal()),
              "".join(rng.choice(list("IXYZ"), n))) for _ in range(n_terms)]
    return Hamiltonian(n, terms)
