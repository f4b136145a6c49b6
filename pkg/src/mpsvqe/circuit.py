"""Parameterized circuit IR, the MPS-structured ansatz, and noise-scaling folds."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

GATE_KINDS = ("RZ", "RY", "X", "CNOT")

X_MAT = np.array([[0, 1], [1, 0]], dtype=complex)
CNOT_MAT = np.array(
    [[1, 0, 0, 0],
     [0, 1, 0, 0],
     [0, 0, 0, 1],
     [0, 0, 1, 0]], dtype=complex)


def rz_matrix(theta: float) -> np.ndarray:
    return np.array([[np.exp(-0.5j * theta), 0], [0, np.exp(0.5j * theta)]])


def ry_matrix(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


@dataclass(frozen=True)
class Gate:
    """One circuit operation.

    Rotations (RZ, RY) carry either a parameter reference (param_index with a
    sign, so folded circuits can reference -theta of a base parameter) or a
    literal angle.  X and CNOT carry neither.  For CNOT the control is
    targets[0].
    """

    kind: str
    targets: tuple[int, ...]
    param_index: Optional[int] = None
    param_sign: int = 1
    literal: Optional[float] = None

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if self.kind in ("X", "CNOT"):
            if self.param_index is not None or self.literal is not None:
                raise ValueError(f"{self.kind} takes no parameter")
            want = 1 if self.kind == "X" else 2
            if len(self.targets) != want:
                raise ValueError(f"{self.kind} takes {want} target(s)")
        else:
            if len(self.targets) != 1:
                raise ValueError(f"{self.kind} takes one target")
            if (self.param_index is None) == (self.literal is None):
                raise ValueError("rotation needs exactly one of param_index, literal")
        if self.kind == "CNOT" and self.targets[0] == self.targets[1]:
            raise ValueError("CNOT targets must be distinct")

    @property
    def is_rotation(self) -> bool:
        return self.kind in ("RZ", "RY")

    def angle(self, theta: np.ndarray) -> float:
        if self.literal is not None:
            return self.literal
        return self.param_sign * float(theta[self.param_index])

    def matrix(self, theta: np.ndarray) -> np.ndarray:
        if self.kind == "X":
            return X_MAT
        if self.kind == "CNOT":
            return CNOT_MAT
        a = self.angle(theta)
        return rz_matrix(a) if self.kind == "RZ" else ry_matrix(a)


class ParamCircuit:
    """Ordered gate list over a shared parameter vector of size n_params."""

    def __init__(self, n_qubits: int, gates, n_params: int):
        self.n_qubits = n_qubits
        self.gates = tuple(gates)
        self.n_params = n_params
        used = set()
        for g in self.gates:
            for t in g.targets:
                if not 0 <= t < n_qubits:
                    raise ValueError(f"target {t} out of range for {n_qubits} qubits")
            if g.param_index is not None:
                if not 0 <= g.param_index < n_params:
                    raise ValueError(f"param index {g.param_index} out of range")
                used.add(g.param_index)
        if used != set(range(n_params)):
            raise ValueError("every parameter must be referenced by at least one gate")
        self._lowered = None

    def __len__(self) -> int:
        return len(self.gates)

    def dump(self) -> str:
        """One gate per line: KIND targets [p<idx> | -p<idx> | literal | -]."""
        lines = []
        for g in self.gates:
            if g.param_index is not None:
                tail = f"{'-' if g.param_sign < 0 else ''}p{g.param_index}"
            elif g.literal is not None:
                tail = repr(g.literal)
            else:
                tail = "-"
            lines.append(f"{g.kind} {' '.join(map(str, g.targets))} {tail}")
        return "\n".join(lines)


@dataclass(frozen=True)
class GateMetrics:
    n_qubits: int
    total_gates: int
    parameter_gates: int
    two_qubit_gates: int


def _u3(qubit: int, p: int) -> list[Gate]:
    # RZ(t2) RY(t1) RZ(t0) in application order; params assigned in gate order
    return [Gate("RZ", (qubit,), param_index=p),
            Gate("RY", (qubit,), param_index=p + 1),
            Gate("RZ", (qubit,), param_index=p + 2)]


def build_ansatz(n_qubits: int, layers: int) -> ParamCircuit:
    """MPS-structured staircase ansatz.

    Each layer places one two-qubit block on every adjacent pair, descending
    from (n-2, n-1) to (0, 1).  A block is a single CNOT (control on the lower
    qubit) dressed before and after with a 3-rotation RZ-RY-RZ unit on each
    qubit, 12 parameterized rotations in total, and leaves every qubit ending
    in an RZ.
    """
    if n_qubits < 2 or layers < 1:
        raise ValueError("need n_qubits >= 2 and layers >= 1")
    gates: list[Gate] = []
    p = 0
    for _ in range(layers):
        for q in range(n_qubits - 2, -1, -1):
            gates += _u3(q, p)
            gates += _u3(q + 1, p + 3)
            gates.append(Gate("CNOT", (q, q + 1)))
            gates += _u3(q, p + 6)
            gates += _u3(q + 1, p + 9)
            p += 12
    return ParamCircuit(n_qubits, gates, p)


def prepend_reference_state(c: ParamCircuit, bits: str) -> ParamCircuit:
    """Insert X gates before the circuit on every 1-bit of the reference state."""
    if len(bits) != c.n_qubits:
        raise ValueError(f"bitstring length {len(bits)} != {c.n_qubits} qubits")
    xs = [Gate("X", (q,)) for q, b in enumerate(bits) if b == "1"]
    return ParamCircuit(c.n_qubits, xs + list(c.gates), c.n_params)


def adjoint_of(g: Gate) -> Gate:
    """Adjoint gate: rotations negate their angle, X and CNOT are self-adjoint."""
    if not g.is_rotation:
        return g
    if g.param_index is not None:
        return Gate(g.kind, g.targets, param_index=g.param_index,
                    param_sign=-g.param_sign)
    return Gate(g.kind, g.targets, literal=-g.literal)


def fold(c: ParamCircuit, lam: float, mode: str = "per_gate") -> tuple[ParamCircuit, float]:
    """Scale circuit depth by ~lam while preserving noiseless semantics.

    Odd integer lam = 2k+1 is exact: per_gate maps every gate G to G (G^ G)^k,
    global maps the whole circuit C to C (C^ C)^k.  Other lam values fold a
    suffix of the gate list one extra time; returns (circuit, achieved lam).
    """
    if lam < 1:
        raise ValueError("fold factor must be >= 1")
    if mode not in ("per_gate", "global"):
        raise ValueError(f"unknown fold mode {mode!r}")
    base = len(c.gates)
    if base == 0:
        return c, 1.0
    k = int((lam - 1) // 2)
    n_partial = int(round((lam - (2 * k + 1)) * base / 2))
    if n_partial >= base:
        k += 1
        n_partial = 0
    achieved = (2 * k + 1) + 2 * n_partial / base
    if k == 0 and n_partial == 0:
        return c, 1.0

    gates: list[Gate] = []
    if mode == "per_gate":
        cut = base - n_partial
        for i, g in enumerate(c.gates):
            reps = k + 1 if i >= cut else k
            gates.append(g)
            for _ in range(reps):
                gates.append(adjoint_of(g))
                gates.append(g)
    else:
        fwd = list(c.gates)
        rev = [adjoint_of(g) for g in reversed(fwd)]
        gates = list(fwd)
        for _ in range(k):
            gates += rev + fwd
        if n_partial:
            suffix = fwd[base - n_partial:]
            gates += [adjoint_of(g) for g in reversed(suffix)] + suffix
    return ParamCircuit(c.n_qubits, gates, c.n_params), achieved


def metrics(c: ParamCircuit) -> GateMetrics:
    total = len(c.gates)
    params = sum(1 for g in c.gates if g.param_index is not None)
    twoq = sum(1 for g in c.gates if len(g.targets) == 2)
    return GateMetrics(c.n_qubits, total, params, twoq)
