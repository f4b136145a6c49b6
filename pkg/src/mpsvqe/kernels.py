"""Hot numeric kernels for state evolution and Pauli expectations.

Two interchangeable backends: numba-compiled loops (default) and pure numpy.
Set MPSVQE_NO_NUMBA=1 to force the numpy path.  All kernels mutate the flat
state buffer in place; qubit 0 is the most significant bit of the basis index,
so qubit q has bit stride 2**(n-1-q).

A density matrix on n qubits is treated as a flat buffer over 2n index
"qubits": row qubit q is register position q, column qubit q is position n+q.
"""

from __future__ import annotations

import os

import numpy as np

_flag = os.environ.get("MPSVQE_NO_NUMBA", "").lower()
USE_NUMBA = _flag not in ("1", "true", "yes")
if USE_NUMBA:
    try:
        from numba import njit
    except ImportError:
        USE_NUMBA = False


# ---------------------------------------------------------------------------
# numpy backend
# ---------------------------------------------------------------------------

def _np_apply_1q(state, mat, q, n):
    psi = state.reshape((2,) * n)
    psi = np.moveaxis(np.tensordot(mat, psi, axes=([1], [q])), 0, q)
    state[:] = psi.reshape(-1)


def _np_apply_2q(state, mat, qa, qb, n):
    psi = state.reshape((2,) * n)
    m = mat.reshape(2, 2, 2, 2)
    psi = np.moveaxis(np.tensordot(m, psi, axes=([2, 3], [qa, qb])), [0, 1], [qa, qb])
    state[:] = psi.reshape(-1)


def _np_run_ops(state, kinds, q0, q1, mats, n):
    for i in range(kinds.shape[0]):
        if kinds[i] == 1:
            _np_apply_1q(state, mats[i, :2, :2], q0[i], n)
        else:
            _np_apply_2q(state, mats[i], q0[i], q1[i], n)


def _np_expval_sv(psi, coeffs, mx, signs, phases):
    idx = np.arange(psi.size)
    total = 0.0
    for t in range(coeffs.size):
        acc = np.sum(np.conj(psi) * signs[t] * psi[idx ^ mx[t]])
        total += coeffs[t] * (phases[t] * acc).real
    return total


def _np_expval_dm(rho, coeffs, mx, signs, phases):
    idx = np.arange(rho.shape[0])
    total = 0.0
    for t in range(coeffs.size):
        acc = np.sum(signs[t] * rho[idx ^ mx[t], idx])
        total += coeffs[t] * (phases[t] * acc).real
    return total


numpy_backend = {
    "apply_1q": _np_apply_1q,
    "apply_2q": _np_apply_2q,
    "run_ops": _np_run_ops,
    "expval_sv": _np_expval_sv,
    "expval_dm": _np_expval_dm,
}


# ---------------------------------------------------------------------------
# numba backend
# ---------------------------------------------------------------------------

if USE_NUMBA:

    @njit(cache=True)
    def _nb_apply_1q(state, mat, q, n):
        stride = 1 << (n - 1 - q)
        period = stride << 1
        for start in range(0, state.size, period):
            for off in range(stride):
                i0 = start + off
                i1 = i0 + stride
                a = state[i0]
                b = state[i1]
                state[i0] = mat[0, 0] * a + mat[0, 1] * b
                state[i1] = mat[1, 0] * a + mat[1, 1] * b

    @njit(cache=True)
    def _nb_apply_2q(state, mat, qa, qb, n):
        sa = 1 << (n - 1 - qa)
        sb = 1 << (n - 1 - qb)
        for i in range(state.size):
            if (i & sa) == 0 and (i & sb) == 0:
                v0 = state[i]
                v1 = state[i + sb]
                v2 = state[i + sa]
                v3 = state[i + sa + sb]
                state[i] = mat[0, 0] * v0 + mat[0, 1] * v1 + mat[0, 2] * v2 + mat[0, 3] * v3
                state[i + sb] = mat[1, 0] * v0 + mat[1, 1] * v1 + mat[1, 2] * v2 + mat[1, 3] * v3
                state[i + sa] = mat[2, 0] * v0 + mat[2, 1] * v1 + mat[2, 2] * v2 + mat[2, 3] * v3
                state[i + sa + sb] = mat[3, 0] * v0 + mat[3, 1] * v1 + mat[3, 2] * v2 + mat[3, 3] * v3

    @njit(cache=True)
    def _nb_run_ops(state, kinds, q0, q1, mats, n):
        for i in range(kinds.shape[0]):
            if kinds[i] == 1:
                _nb_apply_1q(state, mats[i, :2, :2], q0[i], n)
            else:
                _nb_apply_2q(state, mats[i], q0[i], q1[i], n)

    @njit(cache=True)
    def _nb_expval_sv(psi, coeffs, mx, signs, phases):
        total = 0.0
        for t in range(coeffs.size):
            acc = 0.0 + 0.0j
            m = mx[t]
            for r in range(psi.size):
                acc += np.conj(psi[r]) * signs[t, r] * psi[r ^ m]
            total += coeffs[t] * (phases[t] * acc).real
        return total

    @njit(cache=True)
    def _nb_expval_dm(rho, coeffs, mx, signs, phases):
        total = 0.0
        for t in range(coeffs.size):
            acc = 0.0 + 0.0j
            m = mx[t]
            for r in range(rho.shape[0]):
                acc += signs[t, r] * rho[r ^ m, r]
            total += coeffs[t] * (phases[t] * acc).real
        return total

    numba_backend = {
        "apply_1q": _nb_apply_1q,
        "apply_2q": _nb_apply_2q,
        "run_ops": _nb_run_ops,
        "expval_sv": _nb_expval_sv,
        "expval_dm": _nb_expval_dm,
    }
else:
    numba_backend = None

_active = numba_backend if USE_NUMBA else numpy_backend
BACKEND = "numba" if USE_NUMBA else "numpy"

apply_1q = _active["apply_1q"]
apply_2q = _active["apply_2q"]
run_ops = _active["run_ops"]
expval_sv = _active["expval_sv"]
expval_dm = _active["expval_dm"]
