"""Benchmark the numba kernels against the pure-numpy fallback.

Run:  python benchmarks/bench_kernels.py
The active backend for the package itself is controlled by MPSVQE_NO_NUMBA;
this script times both backends in-process through the backend tables.
"""

import time

import numpy as np

from mpsvqe import hamio, kernels
from mpsvqe.circuit import build_ansatz, prepend_reference_state
from mpsvqe.sim import _lowered


def time_it(fn, repeats=20):
    fn()  # warm-up (jit compilation)
    t0 = time.perf_counter()
    for _ in range(repeats):
        fn()
    return (time.perf_counter() - t0) / repeats


def bench_backend(name, backend, low, n, ham_tables):
    theta = np.linspace(-1, 1, 84)
    mats = low.mats_for(theta)
    coeffs, mx, signs, phases = ham_tables

    def run_circuit():
        psi = np.zeros(1 << n, dtype=np.complex128)
        psi[0] = 1.0
        backend["run_ops"](psi, low.kinds, low.q0, low.q1, mats, n)
        return psi

    psi = run_circuit()
    rho = np.outer(psi, psi.conj())

    rows = [
        ("statevector circuit (95 gates)", time_it(run_circuit)),
        ("expectation <H> statevector", time_it(
            lambda: backend["expval_sv"](psi, coeffs, mx, signs, phases))),
        ("expectation <H> density matrix", time_it(
            lambda: backend["expval_dm"](rho, coeffs, mx, signs, phases))),
        ("1q gate on density matrix", time_it(
            lambda: backend["apply_1q"](rho.reshape(-1), mats[4, :2, :2], 3, 2 * n))),
        ("2q gate on density matrix", time_it(
            lambda: backend["apply_2q"](rho.reshape(-1), mats[6], 2, 3, 2 * n))),
    ]
    print(f"\n{name}")
    for label, dt in rows:
        print(f"  {label:35s} {dt * 1e6:10.1f} us")
    return {label: dt for label, dt in rows}


def main():
    h = hamio.load(hamio.builtin_fixture("h4_sto3g"))
    n = h.n_qubits
    c = prepend_reference_state(build_ansatz(n, 1), hamio.hartree_fock_bits(h))
    low = _lowered(c)
    tables = h.packed()

    np_times = bench_backend("numpy backend", kernels.numpy_backend, low, n, tables)
    if kernels.numba_backend is None:
        print("\nnumba backend unavailable (MPSVQE_NO_NUMBA set or numba missing)")
        return
    nb_times = bench_backend("numba backend", kernels.numba_backend, low, n, tables)

    print("\nspeedup (numpy / numba)")
    for label in np_times:
        print(f"  {label:35s} {np_times[label] / nb_times[label]:10.1f}x")


if __name__ == "__main__":
    main()
