"""Pauli-string algebra, Hamiltonians, and qubit-wise commuting measurement groups."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SizeGuardError

PAULI_CHARS = "IXYZ"

PAULI_MATS = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# single-qubit products: (a, b) -> (phase, a*b)
_PROD = {}
for _p in PAULI_CHARS:
    _PROD[("I", _p)] = (1.0 + 0j, _p)
    _PROD[(_p, "I")] = (1.0 + 0j, _p)
    _PROD[(_p, _p)] = (1.0 + 0j, "I")
_PROD[("X", "Y")] = (1j, "Z")
_PROD[("Y", "X")] = (-1j, "Z")
_PROD[("Y", "Z")] = (1j, "X")
_PROD[("Z", "Y")] = (-1j, "X")
_PROD[("Z", "X")] = (1j, "Y")
_PROD[("X", "Z")] = (-1j, "Y")

MERGE_TOL = 1e-12


@dataclass(frozen=True)
class PauliString:
    """Tensor product of single-qubit Paulis, one letter per qubit (qubit 0 leftmost)."""

    ops: str

    def __post_init__(self):
        if not self.ops or any(c not in PAULI_CHARS for c in self.ops):
            raise ValueError(f"invalid Pauli string {self.ops!r}")

    @property
    def n_qubits(self) -> int:
        return len(self.ops)

    @property
    def is_identity(self) -> bool:
        return set(self.ops) == {"I"}

    def support(self) -> list[int]:
        return [q for q, c in enumerate(self.ops) if c != "I"]

    def __str__(self) -> str:
        return self.ops


@dataclass(frozen=True)
class PauliTerm:
    """A real-weighted Pauli string; the coefficient is in Hartree."""

    coeff: float
    string: PauliString

    def __post_init__(self):
        if not np.isfinite(self.coeff):
            raise ValueError("coefficient must be finite")


class Hamiltonian:
    """Real linear combination of Pauli strings over a fixed qubit register.

    Duplicate strings are merged by coefficient addition on construction and
    terms with |coeff| < 1e-12 after merging are dropped.  Term order is the
    first-occurrence order of the distinct strings, which makes downstream
    grouping deterministic.
    """

    def __init__(self, n_qubits: int, terms, metadata: dict | None = None):
        if n_qubits <= 0:
            raise ValueError("n_qubits must be positive")
        self.n_qubits = n_qubits
        self.metadata = dict(metadata) if metadata else {}
        merged: dict[str, float] = {}
        for t in terms:
            if isinstance(t, PauliTerm):
                coeff, string = t.coeff, t.string
            else:
                coeff, string = t
                if not isinstance(string, PauliString):
                    string = PauliString(string)
            if string.n_qubits != n_qubits:
                raise ValueError(
                    f"term {string} has {string.n_qubits} qubits, expected {n_qubits}")
            if not np.isfinite(coeff):
                raise ValueError(f"term {string} has non-finite coefficient {coeff}")
            merged[string.ops] = merged.get(string.ops, 0.0) + float(coeff)
        self.terms = [PauliTerm(c, PauliString(s)) for s, c in merged.items()
                      if abs(c) >= MERGE_TOL]
        self._packed = None

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def packed(self):
        """Cached (coeffs, x_mask, signs, y_phase) arrays for fast expectation kernels.

        Term t has matrix elements P[r, r ^ x_mask[t]] = y_phase[t] * signs[t, r]
        with qubit 0 in the most significant bit of the basis index r.
        """
        if self._packed is None:
            m = len(self.terms)
            n = self.n_qubits
            coeffs = np.empty(m)
            mx = np.zeros(m, dtype=np.int64)
            mzy = np.zeros(m, dtype=np.uint64)
            phase = np.empty(m, dtype=np.complex128)
            for i, t in enumerate(self.terms):
                coeffs[i] = t.coeff
                ny = 0
                for q, c in enumerate(t.string.ops):
                    bit = 1 << (n - 1 - q)  # qubit 0 is the MSB
                    if c in "XY":
                        mx[i] |= bit
                    if c in "ZY":
                        mzy[i] |= np.uint64(bit)
                    if c == "Y":
                        ny += 1
                phase[i] = (-1j) ** ny
            idx = np.arange(1 << n, dtype=np.uint64)
            signs = (1 - 2 * (np.bitwise_count(idx[None, :] & mzy[:, None]) & 1)).astype(np.int8)
            self._packed = (coeffs, mx, signs, phase)
        return self._packed

    def dense_matrix(self) -> np.ndarray:
        """Dense 2^n x 2^n matrix of the full Hamiltonian (n <= 12)."""
        if self.n_qubits > 12:
            raise SizeGuardError("dense form supports at most 12 qubits")
        coeffs, mx, signs, phases = self.packed()
        dim = 1 << self.n_qubits
        rows = np.arange(dim)
        out = np.zeros((dim, dim), dtype=complex)
        for t in range(coeffs.size):
            out[rows, rows ^ mx[t]] += coeffs[t] * phases[t] * signs[t]
        return out


@dataclass
class MeasurementGroup:
    """Set of Hamiltonian term indices that share a single measurement setting.

    basis holds one of 'Z', 'X', 'Y' per qubit: the Pauli basis the qubit is
    read out in ('Z' also covers qubits untouched by every member).
    """

    member_indices: list[int]
    basis: str = ""

    def __len__(self) -> int:
        return len(self.member_indices)


def _check_lengths(a: PauliString, b: PauliString):
    if a.n_qubits != b.n_qubits:
        raise ValueError(f"length mismatch: {a.n_qubits} vs {b.n_qubits}")


def multiply(a: PauliString, b: PauliString) -> tuple[complex, PauliString]:
    """Product a*b as (global phase, resulting string); phase is one of +-1, +-i."""
    _check_lengths(a, b)
    phase = 1.0 + 0j
    out = []
    for ca, cb in zip(a.ops, b.ops):
        ph, c = _PROD[(ca, cb)]
        phase *= ph
        out.append(c)
    return phase, PauliString("".join(out))


def commutes(a: PauliString, b: PauliString) -> bool:
    """True iff [a, b] = 0: an even number of positions anticommute site-wise."""
    _check_lengths(a, b)
    odd = sum(1 for ca, cb in zip(a.ops, b.ops)
              if ca != "I" and cb != "I" and ca != cb)
    return odd % 2 == 0


def qubitwise_commutes(a: PauliString, b: PauliString) -> bool:
    """True iff at every qubit the operators are equal or one is the identity."""
    _check_lengths(a, b)
    return all(ca == "I" or cb == "I" or ca == cb for ca, cb in zip(a.ops, b.ops))


def group_terms(h: Hamiltonian) -> list[MeasurementGroup]:
    """Partition terms into qubit-wise commuting groups.

    Greedy sequential coloring over terms sorted by descending |coeff|
    (ties broken by original index), so grouping is deterministic for a
    fixed term ordering.  Each group gets the per-qubit measurement basis
    shared by its members.
    """
    if len(h) == 0:
        raise ValueError("cannot group an empty Hamiltonian")
    order = sorted(range(len(h.terms)), key=lambda i: (-abs(h.terms[i].coeff), i))
    # per group, track the union basis: 'I' where still unconstrained
    groups: list[list[int]] = []
    bases: list[list[str]] = []
    for idx in order:
        s = h.terms[idx].string.ops
        placed = False
        for g, basis in zip(groups, bases):
            if all(c == "I" or b == "I" or c == b for c, b in zip(s, basis)):
                g.append(idx)
                for q, c in enumerate(s):
                    if c != "I":
                        basis[q] = c
                placed = True
                break
        if not placed:
            groups.append([idx])
            bases.append(list(s))
    out = []
    for g, basis in zip(groups, bases):
        g.sort()
        out.append(MeasurementGroup(g, "".join(c if c != "I" else "Z" for c in basis)))
    return out


def matrix_of(s: PauliString) -> np.ndarray:
    """Dense 2^n x 2^n matrix of the string (oracle helper, n <= 10)."""
    if s.n_qubits > 10:
        raise SizeGuardError("matrix_of supports at most 10 qubits")
    m = np.array([[1.0 + 0j]])
    for c in s.ops:
        m = np.kron(m, PAULI_MATS[c])
    return m
