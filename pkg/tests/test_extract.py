"""Mapping pre-trained matrix product states onto ansatz parameters."""

import numpy as np
import pytest

from mpsvqe import circuit, hamio, mps
from mpsvqe.sim import expectation, run_statevector


def prepared_overlap(m, theta, n, layers=1, bits=None):
    c = circuit.build_ansatz(n, layers)
    if bits and "1" in bits:
        c = circuit.prepend_reference_state(c, bits)
    psi = run_statevector(c, theta)
    return abs(np.vdot(mps.dense(m).amplitudes, psi.amplitudes))


class TestBlockUnitary:
    def test_matches_circuit_lowering(self, rng):
        theta = rng.uniform(-np.pi, np.pi, 12)
        u = mps.block_unitary(theta)
        c = circuit.build_ansatz(2, 1)
        psi00 = run_statevector(c, theta).amplitudes
        assert np.allclose(u[:, 0], psi00, atol=1e-12)
        assert np.allclose(u.conj().T @ u, np.eye(4), atol=1e-12)

    def test_embed_isometry_is_unitary(self, rng):
        v = rng.standard_normal((4, 2)) + 1j * rng.standard_normal((4, 2))
        q, _ = np.linalg.qr(v)
        full = mps.embed_isometry({1: q[:, 0], 3: q[:, 1]})
        assert np.allclose(full.conj().T @ full, np.eye(4), atol=1e-10)
        assert np.allclose(full[:, 1], q[:, 0])
        assert np.allclose(full[:, 3], q[:, 1])


class TestExtraction:
    def test_product_state(self):
        m = mps.from_product_state("0110")
        theta, info = mps.extract_circuit_params(m, reference_bits="0000", seed=0)
        assert all(f >= 0.999 for f in info["block_fidelities"])
        assert prepared_overlap(m, theta, 4) >= 0.999

    def test_bell_pair(self):
        t0 = np.zeros((1, 2, 2), dtype=complex)
        t0[0, 0, 0] = t0[0, 1, 1] = 1.0
        t1 = np.zeros((2, 2, 1), dtype=complex)
        t1[0, 0, 0] = t1[1, 1, 0] = 2 ** -0.5
        m = mps.canonicalize(mps.MPS([t0, t1]), 0)
        m.tensors[0] /= np.linalg.norm(m.tensors[0])
        theta, info = mps.extract_circuit_params(m, reference_bits="00", seed=0)
        assert prepared_overlap(m, theta, 2) >= 0.99

    def test_pretrained_h4_prepares_below_hf(self, h4):
        bits = hamio.hartree_fock_bits(h4)
        m0 = mps.from_product_state(bits)
        cfg = mps.SweepConfig(learning_rate=0.05, n_sweeps=30,
                              convergence_tol=1e-10, init_noise=0.01, seed=3)
        trained, trace = mps.pretrain(m0, h4, cfg)
        theta, info = mps.extract_circuit_params(trained, reference_bits=bits, seed=0)
        assert info["state_overlap"] > 0.999
        full = circuit.prepend_reference_state(circuit.build_ansatz(8, 1), bits)
        e_circ = expectation(run_statevector(full, theta), h4)
        assert e_circ <= h4.metadata["reference"]["hf_energy"]
        assert e_circ == pytest.approx(trace[-1], abs=1e-3)

    def test_random_chi2_mps(self, rng):
        from conftest import random_mps
        m = mps.canonicalize(random_mps(rng, 5, chi=2, real=True), 0)
        m.tensors[0] /= np.linalg.norm(m.tensors[0])
        theta, info = mps.extract_circuit_params(m, seed=1)
        assert prepared_overlap(m, theta, 5) >= 0.98

    def test_rejects_large_bond(self, rng):
        from conftest import random_mps
        m = random_mps(rng, 4, chi=3)
        with pytest.raises(ValueError, match="bond dimension"):
            mps.extract_circuit_params(m)

    def test_theta_length_matches_ansatz(self, h4):
        m = mps.from_product_state("0000")
        theta, _ = mps.extract_circuit_params(m, seed=0)
        assert theta.size == circuit.build_ansatz(4, 1).n_params
