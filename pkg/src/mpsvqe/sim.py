"""Statevector and density-matrix simulation with CPTP Kraus noise channels.

Noiseless circuits run on a 2^n statevector.  Noisy circuits evolve the full
2^n x 2^n density matrix exactly: after every gate the channels attached by
the NoiseModel are applied (single-qubit depolarizing + thermal relaxation
after 1q gates, two-qubit depolarizing + per-qubit thermal relaxation after
CNOT).  Measurement bit-flip noise acts on sampled classical bits only.

Basis-state indexing puts qubit 0 in the most significant bit.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from . import kernels
from .circuit import ParamCircuit
from .pauli import Hamiltonian, MeasurementGroup, PAULI_MATS

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
S_DAG = np.array([[1, 0], [0, -1j]], dtype=complex)
# rotate-from-X / rotate-from-Y: R P R^dag = Z
BASIS_ROTATIONS = {"Z": None, "X": HADAMARD, "Y": HADAMARD @ S_DAG}


@dataclass
class StateVector:
    amplitudes: np.ndarray
    n_qubits: int

    def validate(self, tol: float = 1e-10):
        if self.amplitudes.size != 1 << self.n_qubits:
            raise ValueError("amplitude count does not match qubit count")
        norm = np.linalg.norm(self.amplitudes)
        if abs(norm - 1.0) > tol:
            raise ValueError(f"statevector norm {norm} deviates from 1")
        return self

    def copy(self) -> "StateVector":
        return StateVector(self.amplitudes.copy(), self.n_qubits)


@dataclass
class DensityMatrix:
    entries: np.ndarray
    n_qubits: int

    def validate(self, tol: float = 1e-10):
        rho = self.entries
        if rho.shape != (1 << self.n_qubits,) * 2:
            raise ValueError("density matrix shape does not match qubit count")
        if np.max(np.abs(rho - rho.conj().T)) > tol:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(rho).real - 1.0) > tol:
            raise ValueError(f"trace {np.trace(rho)} deviates from 1")
        if np.linalg.eigvalsh(rho)[0] < -1e-8:
            raise ValueError("density matrix has a significant negative eigenvalue")
        return self

    def purity(self) -> float:
        return float(np.real(np.sum(self.entries * self.entries.T)))

    def copy(self) -> "DensityMatrix":
        return DensityMatrix(self.entries.copy(), self.n_qubits)


def basis_state(bits: str) -> StateVector:
    """Computational basis state from a 0/1 string, qubit 0 leftmost."""
    n = len(bits)
    if n == 0 or set(bits) - {"0", "1"}:
        raise ValueError(f"invalid bitstring {bits!r}")
    amps = np.zeros(1 << n, dtype=complex)
    amps[int(bits, 2)] = 1.0
    return StateVector(amps, n)


def density_from_statevector(sv: StateVector) -> DensityMatrix:
    return DensityMatrix(np.outer(sv.amplitudes, sv.amplitudes.conj()), sv.n_qubits)


# ---------------------------------------------------------------------------
# Kraus channels
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KrausChannel:
    """CPTP map given by a tuple of equal-dimension square Kraus operators."""

    operators: tuple

    def __post_init__(self):
        if not self.operators:
            raise ValueError("channel needs at least one Kraus operator")
        d = self.operators[0].shape[0]
        if d not in (2, 4):
            raise ValueError("only 1- and 2-qubit channels are supported")
        total = sum(K.conj().T @ K for K in self.operators)
        if np.max(np.abs(total - np.eye(d))) > 1e-10:
            raise ValueError("Kraus operators do not satisfy completeness")

    @property
    def dim(self) -> int:
        return self.operators[0].shape[0]

    @property
    def n_targets(self) -> int:
        return 1 if self.dim == 2 else 2

    def superoperator(self) -> np.ndarray:
        """Matrix acting on row-major vec(rho)."""
        return sum(np.kron(K, K.conj()) for K in self.operators)


def depolarizing_channel(p: float, k: int = 1) -> KrausChannel:
    """Uniform depolarizing over the 4^k - 1 non-identity k-qubit Paulis.

    rho -> (1-p) rho + p/(4^k-1) sum_P P rho P
    """
    if not 0 <= p <= 1:
        raise ValueError("probability must lie in [0, 1]")
    if k not in (1, 2):
        raise ValueError("k must be 1 or 2")
    if p == 0:
        return KrausChannel((np.eye(2 ** k, dtype=complex),))
    paulis_1q = [PAULI_MATS[c] for c in "IXYZ"]
    if k == 1:
        paulis = paulis_1q
    else:
        paulis = [np.kron(a, b) for a in paulis_1q for b in paulis_1q]
    n_err = len(paulis) - 1
    ops = []
    if p < 1:
        ops.append(np.sqrt(1 - p) * paulis[0])
    ops += [np.sqrt(p / n_err) * P for P in paulis[1:]]
    return KrausChannel(tuple(ops))


def amplitude_damping_channel(gamma: float) -> KrausChannel:
    K0 = np.array([[1, 0], [0, np.sqrt(1 - gamma)]], dtype=complex)
    K1 = np.array([[0, np.sqrt(gamma)], [0, 0]], dtype=complex)
    return KrausChannel((K0, K1))


def phase_flip_channel(pz: float) -> KrausChannel:
    if pz == 0:
        return KrausChannel((np.eye(2, dtype=complex),))
    return KrausChannel((np.sqrt(1 - pz) * PAULI_MATS["I"], np.sqrt(pz) * PAULI_MATS["Z"]))


def thermal_relaxation_channel(t1_us: float, t2_us: float, t_ns: float) -> KrausChannel:
    """Amplitude damping composed with pure dephasing over a gate of t_ns.

    gamma = 1 - exp(-t/T1); the dephasing flip probability comes from the pure
    dephasing time 1/T_phi = 1/T2 - 1/(2 T1), which requires T2 <= 2 T1.
    """
    if t1_us <= 0 or t2_us <= 0 or t_ns <= 0:
        raise ValueError("times must be positive")
    if t2_us > 2 * t1_us + 1e-12:
        raise ValueError("thermal relaxation requires T2 <= 2*T1")
    t = t_ns * 1e-9
    t1, t2 = t1_us * 1e-6, t2_us * 1e-6
    gamma = 1.0 - np.exp(-t / t1)
    inv_tphi = 1.0 / t2 - 0.5 / t1
    pz = 0.0 if inv_tphi <= 0 else 0.5 * (1.0 - np.exp(-t * inv_tphi))
    return compose_channels(amplitude_damping_channel(gamma), phase_flip_channel(pz))


def bitflip_channel(p: float) -> KrausChannel:
    if not 0 <= p <= 1:
        raise ValueError("probability must lie in [0, 1]")
    if p == 0:
        return KrausChannel((np.eye(2, dtype=complex),))
    ops = []
    if p < 1:
        ops.append(np.sqrt(1 - p) * PAULI_MATS["I"])
    ops.append(np.sqrt(p) * PAULI_MATS["X"])
    return KrausChannel(tuple(ops))


def compose_channels(first: KrausChannel, *rest: KrausChannel) -> KrausChannel:
    """Channel applying `first`, then each of `rest` in order."""
    ops = list(first.operators)
    for ch in rest:
        ops = [K2 @ K1 for K2 in ch.operators for K1 in ops]
    return KrausChannel(tuple(ops))


def compress_channel(ch: KrausChannel) -> KrausChannel:
    """Minimal Kraus form via eigendecomposition of the Choi matrix."""
    d = ch.dim
    choi = np.zeros((d * d, d * d), dtype=complex)
    for K in ch.operators:
        v = K.reshape(-1)
        choi += np.outer(v, v.conj())
    vals, vecs = np.linalg.eigh(choi)
    ops = tuple(np.sqrt(lam) * vecs[:, i].reshape(d, d)
                for i, lam in enumerate(vals) if lam > 1e-14)
    return KrausChannel(ops)


# ---------------------------------------------------------------------------
# noise model
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NoiseModel:
    """Per-gate-class noise parameters; defaults reproduce the reference setup."""

    p_depol_1q: float = 0.001
    p_depol_2q: float = 0.004
    t1_us: float = 100.0
    t2_us: float = 50.0
    t_gate_1q_ns: float = 30.0
    t_gate_2q_ns: float = 80.0
    p_meas_flip: float = 0.05

    def __post_init__(self):
        for p in (self.p_depol_1q, self.p_depol_2q, self.p_meas_flip):
            if not 0 <= p <= 1:
                raise ValueError("probabilities must lie in [0, 1]")
        if self.t1_us <= 0 or self.t2_us <= 0:
            raise ValueError("relaxation times must be positive")
        if self.t_gate_1q_ns <= 0 or self.t_gate_2q_ns <= 0:
            raise ValueError("gate times must be positive")
        if self.t2_us > 2 * self.t1_us + 1e-12:
            raise ValueError("T2 must not exceed 2*T1")


@functools.lru_cache(maxsize=16)
def _noise_channels(noise: NoiseModel):
    """(1q-gate channel, 2q depolarizing, 2q-gate per-qubit thermal) Kraus stacks."""
    ch1 = compress_channel(compose_channels(
        depolarizing_channel(noise.p_depol_1q, 1),
        thermal_relaxation_channel(noise.t1_us, noise.t2_us, noise.t_gate_1q_ns)))
    ch2 = depolarizing_channel(noise.p_depol_2q, 2)
    th2 = thermal_relaxation_channel(noise.t1_us, noise.t2_us, noise.t_gate_2q_ns)
    return (np.array(ch1.operators), np.array(ch2.operators), np.array(th2.operators))


# ---------------------------------------------------------------------------
# applying gates and channels
# ---------------------------------------------------------------------------

def _check_targets(n_qubits, targets, dim):
    if len(set(targets)) != len(targets):
        raise ValueError("targets must be distinct")
    for t in targets:
        if not 0 <= t < n_qubits:
            raise ValueError(f"target {t} out of range")
    if dim != 2 ** len(targets):
        raise ValueError(f"operator dimension {dim} does not match {len(targets)} target(s)")


def apply_gate(state, gate: np.ndarray, targets) -> "StateVector | DensityMatrix":
    """Apply a 2x2 or 4x4 unitary to the given qubits; returns a new state."""
    targets = tuple(targets)
    _check_targets(state.n_qubits, targets, gate.shape[0])
    if isinstance(state, StateVector):
        out = state.amplitudes.copy()
        _apply_unitary_sv(out, gate, targets, state.n_qubits)
        return StateVector(out, state.n_qubits)
    out = state.entries.copy()
    _apply_unitary_dm(out, gate, targets, state.n_qubits)
    return DensityMatrix(out, state.n_qubits)


def _apply_unitary_sv(flat, gate, targets, n):
    g = np.ascontiguousarray(gate, dtype=np.complex128)
    if len(targets) == 1:
        kernels.apply_1q(flat, g, targets[0], n)
    else:
        kernels.apply_2q(flat, g, targets[0], targets[1], n)


def _apply_unitary_dm(rho, gate, targets, n):
    flat = rho.reshape(-1)
    g = np.ascontiguousarray(gate, dtype=np.complex128)
    gc = np.ascontiguousarray(gate.conj(), dtype=np.complex128)
    if len(targets) == 1:
        kernels.apply_1q(flat, g, targets[0], 2 * n)
        kernels.apply_1q(flat, gc, n + targets[0], 2 * n)
    else:
        kernels.apply_2q(flat, g, targets[0], targets[1], 2 * n)
        kernels.apply_2q(flat, gc, n + targets[0], n + targets[1], 2 * n)


def _apply_kraus_dm(rho, kraus_stack, targets, n):
    """rho <- sum_i K_i rho K_i^dag for a (k, d, d) stack of Kraus operators."""
    out = np.zeros_like(rho)
    for K in kraus_stack:
        tmp = rho.copy()
        _apply_unitary_dm(tmp, K, targets, n)
        out += tmp
    rho[:] = out


def apply_channel(rho: DensityMatrix, ch: KrausChannel, targets) -> DensityMatrix:
    """Kraus-sum application; trace is preserved by channel completeness."""
    targets = tuple(targets)
    _check_targets(rho.n_qubits, targets, ch.dim)
    out = rho.entries.copy()
    _apply_kraus_dm(out, np.array(ch.operators), targets, rho.n_qubits)
    return DensityMatrix(out, rho.n_qubits)


# ---------------------------------------------------------------------------
# circuit execution
# ---------------------------------------------------------------------------

class _Lowered:
    """Per-circuit static arrays consumed by the kernels; angles filled per call."""

    def __init__(self, c: ParamCircuit):
        n_ops = len(c.gates)
        self.kinds = np.empty(n_ops, dtype=np.int64)
        self.q0 = np.zeros(n_ops, dtype=np.int64)
        self.q1 = np.zeros(n_ops, dtype=np.int64)
        self.static = np.zeros((n_ops, 4, 4), dtype=np.complex128)
        rot_pos, rot_param, rot_sign, rot_is_rz = [], [], [], []
        for i, g in enumerate(c.gates):
            self.kinds[i] = len(g.targets)
            self.q0[i] = g.targets[0]
            if len(g.targets) == 2:
                self.q1[i] = g.targets[1]
            if g.param_index is not None:
                rot_pos.append(i)
                rot_param.append(g.param_index)
                rot_sign.append(g.param_sign)
                rot_is_rz.append(g.kind == "RZ")
            else:
                m = g.matrix(np.empty(0))
                self.static[i, : m.shape[0], : m.shape[1]] = m
        self.rot_pos = np.array(rot_pos, dtype=np.int64)
        self.rot_param = np.array(rot_param, dtype=np.int64)
        self.rot_sign = np.array(rot_sign, dtype=np.float64)
        rz = np.array(rot_is_rz, dtype=bool)
        self.rz_pos = self.rot_pos[rz]
        self.ry_pos = self.rot_pos[~rz]
        self.rz_sel = rz

    def mats_for(self, theta: np.ndarray) -> np.ndarray:
        mats = self.static.copy()
        if self.rot_pos.size:
            ang = self.rot_sign * np.asarray(theta, dtype=float)[self.rot_param]
            az = ang[self.rz_sel] / 2
            mats[self.rz_pos, 0, 0] = np.exp(-1j * az)
            mats[self.rz_pos, 1, 1] = np.exp(1j * az)
            ay = ang[~self.rz_sel] / 2
            c, s = np.cos(ay), np.sin(ay)
            mats[self.ry_pos, 0, 0] = c
            mats[self.ry_pos, 0, 1] = -s
            mats[self.ry_pos, 1, 0] = s
            mats[self.ry_pos, 1, 1] = c
        return mats


def _lowered(c: ParamCircuit) -> _Lowered:
    if c._lowered is None:
        c._lowered = _Lowered(c)
    return c._lowered


def run_statevector(c: ParamCircuit, theta) -> StateVector:
    """Noiseless evolution of |0...0> through the circuit."""
    theta = np.asarray(theta, dtype=float)
    if theta.size != c.n_params:
        raise ValueError(f"expected {c.n_params} parameters, got {theta.size}")
    low = _lowered(c)
    psi = np.zeros(1 << c.n_qubits, dtype=np.complex128)
    psi[0] = 1.0
    kernels.run_ops(psi, low.kinds, low.q0, low.q1, low.mats_for(theta), c.n_qubits)
    return StateVector(psi, c.n_qubits)


def run_density(c: ParamCircuit, theta, noise: NoiseModel | None = None) -> DensityMatrix:
    """Exact density-matrix evolution, attaching noise channels after each gate."""
    theta = np.asarray(theta, dtype=float)
    if theta.size != c.n_params:
        raise ValueError(f"expected {c.n_params} parameters, got {theta.size}")
    n = c.n_qubits
    low = _lowered(c)
    mats = low.mats_for(theta)
    rho = np.zeros((1 << n, 1 << n), dtype=np.complex128)
    rho[0, 0] = 1.0
    chans = _noise_channels(noise) if noise is not None else None
    for i in range(low.kinds.shape[0]):
        if low.kinds[i] == 1:
            targets = (int(low.q0[i]),)
            _apply_unitary_dm(rho, mats[i, :2, :2], targets, n)
            if chans is not None:
                _apply_kraus_dm(rho, chans[0], targets, n)
        else:
            ta, tb = int(low.q0[i]), int(low.q1[i])
            _apply_unitary_dm(rho, mats[i], (ta, tb), n)
            if chans is not None:
                _apply_kraus_dm(rho, chans[1], (ta, tb), n)
                _apply_kraus_dm(rho, chans[2], (ta,), n)
                _apply_kraus_dm(rho, chans[2], (tb,), n)
    return DensityMatrix(rho, n)


# ---------------------------------------------------------------------------
# expectation values and sampling
# ---------------------------------------------------------------------------

def expectation(state, h: Hamiltonian) -> float:
    """Exact <H> = sum_i c_i <P_i> in Hartree."""
    if state.n_qubits != h.n_qubits:
        raise ValueError("state and Hamiltonian qubit counts differ")
    coeffs, mx, signs, phases = h.packed()
    if isinstance(state, StateVector):
        return float(kernels.expval_sv(state.amplitudes, coeffs, mx, signs, phases))
    return float(kernels.expval_dm(state.entries, coeffs, mx, signs, phases))


def _measurement_probs(state) -> np.ndarray:
    if isinstance(state, StateVector):
        p = np.abs(state.amplitudes) ** 2
    else:
        p = np.clip(np.real(np.diag(state.entries)), 0.0, None)
    return p / p.sum()


def sample_group(state, group: MeasurementGroup, h: Hamiltonian, shots: int,
                 p_meas_flip: float = 0.0, rng=None) -> dict[int, float]:
    """Empirical per-term expectations from one simultaneous measurement setting.

    Applies the group's single-qubit basis rotations, samples `shots`
    computational-basis bitstrings, flips each classical bit independently
    with p_meas_flip, and averages the post-rotation Z-product of every
    member term.  Returns {term_index: estimate}.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    rng = np.random.default_rng(rng) if not isinstance(rng, np.random.Generator) else rng
    n = state.n_qubits
    if len(group.basis) != n:
        raise ValueError("group basis length does not match state")
    rotated = state.copy()
    for q, b in enumerate(group.basis):
        rot = BASIS_ROTATIONS[b]
        if rot is not None:
            if isinstance(rotated, StateVector):
                _apply_unitary_sv(rotated.amplitudes, rot, (q,), n)
            else:
                _apply_unitary_dm(rotated.entries, rot, (q,), n)

    # validate and collect support masks before sampling
    masks = {}
    for idx in group.member_indices:
        term = h.terms[idx]
        mask = np.uint64(0)
        for q, c in enumerate(term.string.ops):
            if c == "I":
                continue
            if c != group.basis[q]:
                raise ValueError(f"term {term.string} is incompatible with group basis "
                                 f"{group.basis}")
            mask |= np.uint64(1 << (n - 1 - q))
        masks[idx] = mask

    probs = _measurement_probs(rotated)
    outcomes = rng.choice(probs.size, size=shots, p=probs).astype(np.uint64)
    if p_meas_flip > 0:
        flips = rng.random((shots, n)) < p_meas_flip
        weights = (1 << np.arange(n - 1, -1, -1)).astype(np.uint64)
        outcomes ^= flips @ weights
    counts = np.bincount(outcomes.astype(np.int64), minlength=probs.size)

    idx_all = np.arange(probs.size, dtype=np.uint64)
    estimates = {}
    for tidx, mask in masks.items():
        vals = 1 - 2 * (np.bitwise_count(idx_all & mask).astype(np.int64) & 1)
        estimates[tidx] = float(np.dot(counts, vals) / shots)
    return estimates
