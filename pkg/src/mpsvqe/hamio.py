"""Hamiltonian file format, fixture loading, and the exact diagonalization oracle.

A Hamiltonian file is a single JSON document:

    {
      "format_version": 1,
      "n_qubits": 2,
      "n_electrons": 2,
      "ordering": "interleaved",
      "geometry": [["H", 0.0, 0.0, 0.0], ["H", 0.0, 0.0, 0.74]],
      "basis": "sto-3g",
      "terms": [[-1.1167593, "II"], [0.1744128, "ZI"], ...],
      "reference": {"hf_energy": -1.1167593075, "fci_energy": -1.1372838347}
    }

Pauli letter strings put qubit 0 leftmost.  Coefficients are serialized with
17 significant digits so load/serialize round-trips are byte-stable.  The
ordering field declares the spin-orbital layout ("interleaved" or
"blocked-alpha-beta"), which the Hartree-Fock bitstring construction respects.
"""

from __future__ import annotations

import json
import warnings
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import SizeGuardError
from .pauli import Hamiltonian, PAULI_CHARS

FORMAT_VERSION = 1
ORDERINGS = ("interleaved", "blocked-alpha-beta")
META_KEYS = ("n_electrons", "ordering", "geometry", "basis", "reference")


class HamiltonianFileError(ValueError):
    """Raised when a Hamiltonian file fails to parse or validate."""


def builtin_fixture(name: str = "h4_sto3g") -> Path:
    """Path of a fixture shipped with the package (e.g. 'h4_sto3g')."""
    p = resources.files("mpsvqe").joinpath(f"data/{name}.json")
    return Path(str(p))


def load(path) -> Hamiltonian:
    """Load and validate a Hamiltonian file; file metadata lands in .metadata."""
    path = Path(path)
    if not path.exists():
        raise HamiltonianFileError(f"no such file: {path}")
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise HamiltonianFileError(f"{path}: invalid JSON at line {e.lineno}: {e.msg}") from e

    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise HamiltonianFileError(
            f"{path}: format_version {version!r} not supported (expected {FORMAT_VERSION})")
    n_qubits = doc.get("n_qubits")
    if not isinstance(n_qubits, int) or n_qubits <= 0:
        raise HamiltonianFileError(f"{path}: n_qubits must be a positive integer")
    ordering = doc.get("ordering", "interleaved")
    if ordering not in ORDERINGS:
        raise HamiltonianFileError(f"{path}: unknown ordering {ordering!r}")

    raw_terms = doc.get("terms")
    if not isinstance(raw_terms, list) or not raw_terms:
        raise HamiltonianFileError(f"{path}: terms must be a nonempty list")
    terms = []
    seen = set()
    dupes = 0
    for i, entry in enumerate(raw_terms):
        if not isinstance(entry, list) or len(entry) != 2:
            raise HamiltonianFileError(f"{path}: term {i} must be [coeff, pauli]")
        coeff, s = entry
        if not isinstance(coeff, (int, float)) or not np.isfinite(coeff):
            raise HamiltonianFileError(f"{path}: term {i} coefficient {coeff!r} is not finite")
        if not isinstance(s, str) or len(s) != n_qubits:
            raise HamiltonianFileError(
                f"{path}: term {i} string has length {len(s) if isinstance(s, str) else '?'}"
                f", expected {n_qubits}")
        for pos, c in enumerate(s):
            if c not in PAULI_CHARS:
                raise HamiltonianFileError(
                    f"{path}: term {i} has invalid character {c!r} at position {pos}")
        if s in seen:
            dupes += 1
        seen.add(s)
        terms.append((float(coeff), s))
    if dupes:
        warnings.warn(f"{path}: merged {dupes} duplicate Pauli string(s)")

    meta = {k: doc[k] for k in META_KEYS if k in doc}
    ref = meta.get("reference")
    if ref is not None and "hf_energy" in ref and "fci_energy" in ref:
        if ref["hf_energy"] < ref["fci_energy"] - 1e-9:
            raise HamiltonianFileError(f"{path}: hf_energy below fci_energy")
    return Hamiltonian(n_qubits, terms, metadata=meta)


def serialize(h: Hamiltonian) -> str:
    """Canonical file text for a Hamiltonian carrying file metadata."""
    meta = h.metadata
    lines = ["{"]
    lines.append(f'  "format_version": {FORMAT_VERSION},')
    lines.append(f'  "n_qubits": {h.n_qubits},')
    if "n_electrons" in meta:
        lines.append(f'  "n_electrons": {meta["n_electrons"]},')
    if "ordering" in meta:
        lines.append(f'  "ordering": {json.dumps(meta["ordering"])},')
    if "geometry" in meta:
        lines.append(f'  "geometry": {json.dumps(meta["geometry"])},')
    if "basis" in meta:
        lines.append(f'  "basis": {json.dumps(meta["basis"])},')
    term_lines = ",\n".join(
        f'    [{t.coeff:.17g}, "{t.string.ops}"]' for t in h.terms)
    tail = "," if "reference" in meta else ""
    lines.append(f'  "terms": [\n{term_lines}\n  ]{tail}')
    if "reference" in meta:
        ref = meta["reference"]
        inner = ", ".join(f'"{k}": {ref[k]:.17g}' for k in ("hf_energy", "fci_energy")
                          if k in ref)
        lines.append(f'  "reference": {{{inner}}}')
    lines.append("}")
    return "\n".join(lines) + "\n"


def save(h: Hamiltonian, path):
    Path(path).write_text(serialize(h))


def exact_ground_energy(h: Hamiltonian) -> float:
    """Smallest eigenvalue of the dense Hamiltonian matrix (n <= 12)."""
    if h.n_qubits > 12:
        raise SizeGuardError("exact diagonalization supports at most 12 qubits")
    return float(np.linalg.eigvalsh(h.dense_matrix())[0])


def hartree_fock_bits(h: Hamiltonian) -> str:
    """Occupation bitstring of the Hartree-Fock reference state.

    Interleaved ordering fills the first n_electrons spin orbitals; blocked
    ordering fills the lowest alpha and beta orbitals in their own halves.
    """
    ne = h.metadata.get("n_electrons")
    if ne is None:
        raise ValueError("Hamiltonian metadata is missing n_electrons")
    n = h.n_qubits
    ordering = h.metadata.get("ordering", "interleaved")
    if ordering == "interleaved":
        return "1" * ne + "0" * (n - ne)
    n_orb = n // 2
    na = (ne + 1) // 2
    nb = ne // 2
    return "1" * na + "0" * (n_orb - na) + "1" * nb + "0" * (n_orb - nb)
