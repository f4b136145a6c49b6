"""Acceptance suite: every top-level criterion at its stated tolerance.

Each criterion prints one PASS/FAIL line (run with -s or -rA to see them all).

The noiseless-VQE energy target (best-of-10 <= -2.14 Hartree) is implemented
faithfully but marked as a strict expected failure: the reference circuit
(7 single-CNOT blocks, 91/84/7 gates) provably caps at the bond-dimension-2
variational optimum of -2.1225 Hartree, because every chain cut is crossed by
exactly one operator-Schmidt-rank-2 entangler.  See the companion test, which
verifies the pipeline does reach that circuit-class optimum.
"""

import itertools

import numpy as np
import pytest

from conftest import random_hamiltonian, random_mps
from mpsvqe import circuit, hamio, mps, vqe, zne
from mpsvqe.pauli import group_terms, qubitwise_commutes
from mpsvqe.sim import (NoiseModel, depolarizing_channel, expectation,
                        run_statevector, thermal_relaxation_channel,
                        bitflip_channel)

FCI_REFERENCE = -2.1664
CHI2_OPTIMUM = -2.1225


def report(name, ok, detail):
    print(f"ACCEPTANCE {'PASS' if ok else 'FAIL'} - {name}: {detail}")


@pytest.fixture(scope="module")
def h4():
    return hamio.load(hamio.builtin_fixture("h4_sto3g"))


@pytest.fixture(scope="module")
def hf_bits(h4):
    return hamio.hartree_fock_bits(h4)


def pipeline_run(h4, hf_bits, seed, max_iters=2000, sweeps=60):
    """Pre-train, map onto the ansatz, then SGD in exact noiseless mode."""
    m0 = mps.from_product_state(hf_bits)
    trained, _ = mps.pretrain(m0, h4, mps.SweepConfig(
        learning_rate=0.05, n_sweeps=sweeps, convergence_tol=1e-10,
        init_noise=0.01, seed=seed))
    theta0, _ = mps.extract_circuit_params(trained, reference_bits=hf_bits, seed=seed)
    c = circuit.prepend_reference_state(circuit.build_ansatz(8, 1), hf_bits)
    cfg = vqe.TrainConfig(learning_rate=0.05, max_iters=max_iters, tol=1e-8, seed=seed)
    theta, trace = vqe.train(c, theta0, h4, vqe.EnergyEstimator(), cfg)
    assert len(trace) <= max_iters
    return c, theta, float(min(trace.energies()))


@pytest.fixture(scope="module")
def trained_h4(h4, hf_bits):
    return pipeline_run(h4, hf_bits, seed=0)


def test_gate_metrics():
    m = circuit.metrics(circuit.build_ansatz(8, 1))
    got = (m.total_gates, m.parameter_gates, m.two_qubit_gates)
    ok = got == (91, 84, 7)
    report("gate metrics", ok, f"build_ansatz(8,1) -> {got}, expected (91, 84, 7)")
    assert ok


def test_fci_benchmark(h4):
    e = hamio.exact_ground_energy(h4)
    ok = abs(e - FCI_REFERENCE) <= 5e-4
    report("FCI benchmark", ok, f"{e:.6f} vs {FCI_REFERENCE} (tol 5e-4)")
    assert ok


@pytest.mark.xfail(strict=True, reason=(
    "spec defect: the 91/84/7 single-CNOT-block circuit is exactly"
    " bond-dimension-2 bounded (each cut crossed by one rank-2 entangler), and"
    " the chi=2 variational optimum of this Hamiltonian is -2.1225 Hartree,"
    " above the -2.14 target; see notes/decisions.md"))
def test_noiseless_vqe_energy_target(h4, hf_bits):
    best = np.inf
    for seed in range(10):
        _, _, e = pipeline_run(h4, hf_bits, seed=seed)
        best = min(best, e)
    ok = best <= -2.14
    report("noiseless VQE", ok, f"best of 10 runs {best:.6f}, target <= -2.14")
    assert ok


def test_noiseless_vqe_reaches_circuit_class_optimum(h4, hf_bits):
    # companion check: the pipeline attains the chi=2 optimum, which is the
    # true global minimum over the reference circuit's state class
    best = np.inf
    for seed in range(3):
        _, _, e = pipeline_run(h4, hf_bits, seed=seed)
        best = min(best, e)
    ok = abs(best - CHI2_OPTIMUM) <= 1e-3
    report("noiseless VQE (class optimum)", ok,
           f"best {best:.6f} vs chi=2 optimum {CHI2_OPTIMUM} (tol 1e-3)")
    assert ok


def test_noise_mitigation_claim(h4, trained_h4):
    c, theta, _ = trained_h4
    noise = NoiseModel()
    cfg = zne.ZneConfig(lambdas=(1.0, 3.0, 5.0), model_kind="mlp", seed=0)
    e_zne, diag = zne.mitigated_energy(c, theta, h4, noise, cfg)
    e_raw = diag["scale_points"][0]["estimates"][0]
    e_noiseless = vqe.energy(c, theta, h4, vqe.EnergyEstimator())
    band_ok = abs(e_zne - FCI_REFERENCE) <= 0.1
    improve_fci = abs(e_zne - FCI_REFERENCE) < abs(e_raw - FCI_REFERENCE)
    improve_self = abs(e_zne - e_noiseless) < abs(e_raw - e_noiseless)
    ok = band_ok and improve_fci and improve_self
    report("noise mitigation", ok,
           f"E_zne {e_zne:.5f} (err {abs(e_zne - FCI_REFERENCE):.4f} <= 0.1), "
           f"raw err {abs(e_raw - FCI_REFERENCE):.4f}, improved={improve_fci and improve_self}")
    assert band_ok
    assert improve_fci and improve_self


def test_pretraining_stability(h4, hf_bits):
    seeds = range(20)
    pretrained, random_arm = [], []
    c = circuit.prepend_reference_state(circuit.build_ansatz(8, 1), hf_bits)
    est = vqe.EnergyEstimator()
    for seed in seeds:
        _, _, e = pipeline_run(h4, hf_bits, seed=seed, max_iters=500, sweeps=40)
        pretrained.append(e)
        rng = np.random.default_rng(seed)
        theta0 = rng.uniform(-np.pi, np.pi, c.n_params)
        cfg = vqe.TrainConfig(learning_rate=0.05, max_iters=500, tol=1e-8, seed=seed)
        _, trace = vqe.train(c, theta0, h4, est, cfg)
        random_arm.append(float(min(trace.energies())))
    var_pre = float(np.var(pretrained, ddof=1))
    var_rand = float(np.var(random_arm, ddof=1))
    med_pre = float(np.median(pretrained))
    med_rand = float(np.median(random_arm))
    ok = var_pre < var_rand and med_pre < med_rand
    report("pre-training stability", ok,
           f"variance {var_pre:.3e} < {var_rand:.3e}; "
           f"median {med_pre:.5f} < {med_rand:.5f}")
    assert var_pre < var_rand
    assert med_pre < med_rand


def test_oracle_equivalence_suite(h4):
    rng = np.random.default_rng(777)
    failures = []

    # MPS energy vs dense expectation, n <= 8
    for n in (4, 6, 8):
        h = random_hamiltonian(rng, n, 4 * n)
        m = mps.canonicalize(random_mps(rng, n, chi=3), n // 2)
        m.tensors[n // 2] /= np.linalg.norm(m.tensors[n // 2])
        if abs(mps.energy(m, h) - expectation(mps.dense(m), h)) > 1e-9:
            failures.append(f"mps energy n={n}")

    # canonicalization preserves the state
    m = random_mps(rng, 6, chi=3)
    before = mps.dense(m).amplitudes
    for center in (0, 3, 5):
        after = mps.dense(mps.canonicalize(m, center)).amplitudes
        phase = np.vdot(after, before)
        phase /= abs(phase)
        if np.max(np.abs(before - phase * after)) > 1e-10:
            failures.append(f"canonicalize center={center}")

    # parameter shift vs finite differences
    c = circuit.build_ansatz(4, 1)
    h = random_hamiltonian(rng, 4, 10)
    est = vqe.EnergyEstimator()
    theta = rng.uniform(-np.pi, np.pi, c.n_params)
    g = vqe.gradient(c, theta, h, est)
    eps = 1e-5
    for j in range(theta.size):
        tp, tm = theta.copy(), theta.copy()
        tp[j] += eps
        tm[j] -= eps
        fd = (vqe.energy(c, tp, h, est) - vqe.energy(c, tm, h, est)) / (2 * eps)
        if abs(g[j] - fd) > 1e-6:
            failures.append(f"gradient param {j}")

    # folding unitarity
    theta = rng.uniform(-np.pi, np.pi, c.n_params)
    base = run_statevector(c, theta).amplitudes
    for lam in (1.0, 3.0, 5.0):
        for mode in ("per_gate", "global"):
            folded, _ = circuit.fold(c, lam, mode)
            out = run_statevector(folded, theta).amplitudes
            if np.max(np.abs(out - base)) > 1e-9:
                failures.append(f"fold lam={lam} mode={mode}")

    # CPTP completeness of every channel class
    nm = NoiseModel()
    for ch in (depolarizing_channel(nm.p_depol_1q, 1),
               depolarizing_channel(nm.p_depol_2q, 2),
               thermal_relaxation_channel(nm.t1_us, nm.t2_us, nm.t_gate_1q_ns),
               thermal_relaxation_channel(nm.t1_us, nm.t2_us, nm.t_gate_2q_ns),
               bitflip_channel(nm.p_meas_flip)):
        total = sum(K.conj().T @ K for K in ch.operators)
        if np.max(np.abs(total - np.eye(ch.dim))) > 1e-10:
            failures.append("channel completeness")

    # grouping validity and partition exactness
    groups = group_terms(h4)
    seen = sorted(i for grp in groups for i in grp.member_indices)
    if seen != list(range(len(h4))):
        failures.append("grouping partition")
    for grp in groups:
        members = [h4.terms[i].string for i in grp.member_indices]
        for a, b in itertools.combinations(members, 2):
            if not qubitwise_commutes(a, b):
                failures.append("grouping qwc")

    ok = not failures
    report("oracle equivalence suite", ok,
           "all six checks passed" if ok else f"failed: {failures}")
    assert ok, failures


def test_zne_synthetic_recovery():
    failures = []
    f = lambda lam: 2.0 + 0.5 * np.exp(-0.7 * lam)
    data = [zne.ScalePoint(lam, [f(lam)]) for lam in (1.0, 2.0, 3.0, 5.0)]
    model = zne.fit("exponential", data)
    if abs(model.fitted_params[0] - 2.0) > 1e-3:
        failures.append(f"exponential a={model.fitted_params[0]}")

    const = [zne.ScalePoint(lam, [0.7]) for lam in (1.0, 3.0, 5.0)]
    for kind in ("linear", "polynomial", "exponential", "mlp"):
        e0 = zne.extrapolate(zne.fit(kind, const, spec=zne.MlpSpec(seed=0)))
        if abs(e0 - 0.7) > 1e-6:
            failures.append(f"constant {kind}: {e0}")

    # zero-noise pipeline returns the exact energy
    h2 = hamio.load(hamio.builtin_fixture("h2_sto3g"))
    bits = hamio.hartree_fock_bits(h2)
    c = circuit.prepend_reference_state(circuit.build_ansatz(4, 1), bits)
    rng = np.random.default_rng(5)
    theta = rng.uniform(-0.4, 0.4, c.n_params)
    exact = vqe.energy(c, theta, h2, vqe.EnergyEstimator())
    zero = NoiseModel(p_depol_1q=0.0, p_depol_2q=0.0, t1_us=1e12, t2_us=1e12,
                      p_meas_flip=0.0)
    e_zne, _ = zne.mitigated_energy(c, theta, h2, zero, zne.ZneConfig(seed=0))
    if abs(e_zne - exact) > 1e-6:
        failures.append(f"zero-noise pipeline {e_zne} vs {exact}")

    ok = not failures
    report("ZNE synthetic recovery", ok,
           "all recoveries within tolerance" if ok else f"failed: {failures}")
    assert ok, failures
