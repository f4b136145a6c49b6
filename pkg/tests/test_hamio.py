"""Hamiltonian file format, reference states, and exact diagonalization."""

import numpy as np
import pytest

from mpsvqe import hamio
from mpsvqe.errors import SizeGuardError
from mpsvqe.pauli import Hamiltonian


class TestLoad:
    def test_h4_fixture(self, h4):
        assert h4.n_qubits == 8
        assert h4.metadata["n_electrons"] == 4
        assert h4.metadata["ordering"] == "interleaved"
        assert h4.metadata["basis"] == "sto-3g"
        assert len(h4.metadata["geometry"]) == 4
        assert len(h4) == 185

    def test_round_trip_byte_stable(self, tmp_path, h4):
        p = tmp_path / "h.json"
        hamio.save(h4, p)
        text = p.read_text()
        assert hamio.serialize(hamio.load(p)) == text

    def test_duplicate_strings_merge_with_warning(self, tmp_path):
        p = tmp_path / "dup.json"
        p.write_text('{"format_version": 1, "n_qubits": 1, '
                     '"terms": [[1.0, "Z"], [0.5, "Z"]]}')
        with pytest.warns(UserWarning, match="duplicate"):
            h = hamio.load(p)
        assert len(h) == 1
        assert h.terms[0].coeff == 1.5

    def test_malformed_letter_rejected_with_position(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text('{"format_version": 1, "n_qubits": 2, '
                     '"terms": [[1.0, "ZQ"]]}')
        with pytest.raises(hamio.HamiltonianFileError, match="position 1"):
            hamio.load(p)

    def test_version_mismatch(self, tmp_path):
        p = tmp_path / "v9.json"
        p.write_text('{"format_version": 9, "n_qubits": 1, "terms": [[1.0, "Z"]]}')
        with pytest.raises(hamio.HamiltonianFileError, match="format_version"):
            hamio.load(p)

    def test_invalid_json_reports_line(self, tmp_path):
        p = tmp_path / "broken.json"
        p.write_text('{"format_version": 1,\n  "n_qubits": }')
        with pytest.raises(hamio.HamiltonianFileError, match="line 2"):
            hamio.load(p)

    def test_missing_file(self, tmp_path):
        with pytest.raises(hamio.HamiltonianFileError, match="no such file"):
            hamio.load(tmp_path / "nope.json")

    def test_wrong_length_string(self, tmp_path):
        p = tmp_path / "len.json"
        p.write_text('{"format_version": 1, "n_qubits": 3, "terms": [[1.0, "ZZ"]]}')
        with pytest.raises(hamio.HamiltonianFileError, match="length 2"):
            hamio.load(p)


class TestExactGroundEnergy:
    def test_single_z(self):
        assert hamio.exact_ground_energy(Hamiltonian(1, [(1.0, "Z")])) == pytest.approx(-1.0)

    def test_two_qubit_hand_spectrum(self):
        # H = Z0 Z1 + 0.5 X0: eigenvalues are +-sqrt(1 + 0.25)
        h = Hamiltonian(2, [(1.0, "ZZ"), (0.5, "XI")])
        expected = -np.sqrt(1.25)
        assert hamio.exact_ground_energy(h) == pytest.approx(expected, abs=1e-12)
        # characteristic-polynomial cross-check on the dense matrix
        m = h.dense_matrix()
        evals = np.linalg.eigvalsh(m)
        assert np.allclose(sorted(np.abs(evals)), [np.sqrt(1.25)] * 4)

    def test_h4_matches_reported_benchmark(self, h4):
        assert hamio.exact_ground_energy(h4) == pytest.approx(-2.1664, abs=5e-4)

    def test_invariant_under_term_reordering(self, h4, rng):
        terms = [(t.coeff, t.string.ops) for t in h4]
        rng.shuffle(terms)
        h2 = Hamiltonian(8, terms, metadata=h4.metadata)
        assert hamio.exact_ground_energy(h2) == pytest.approx(
            hamio.exact_ground_energy(h4), abs=1e-12)

    def test_size_guard(self):
        h = Hamiltonian(13, [(1.0, "Z" * 13)])
        with pytest.raises(SizeGuardError):
            hamio.exact_ground_energy(h)


class TestHartreeFockBits:
    def test_h4(self, h4):
        assert hamio.hartree_fock_bits(h4) == "11110000"

    def test_zero_electrons(self):
        h = Hamiltonian(2, [(1.0, "ZZ")], metadata={"n_electrons": 0})
        assert hamio.hartree_fock_bits(h) == "00"

    def test_blocked_ordering(self):
        h = Hamiltonian(8, [(1.0, "Z" * 8)],
                        metadata={"n_electrons": 4, "ordering": "blocked-alpha-beta"})
        assert hamio.hartree_fock_bits(h) == "11001100"

    def test_missing_electron_count(self):
        h = Hamiltonian(2, [(1.0, "ZZ")])
        with pytest.raises(ValueError, match="n_electrons"):
            hamio.hartree_fock_bits(h)

    def test_hf_energy_matches_reference(self, h4, h2):
        from mpsvqe.sim import basis_state, expectation
        for h in (h4, h2):
            e = expectation(basis_state(hamio.hartree_fock_bits(h)), h)
            assert e == pytest.approx(h.metadata["reference"]["hf_energy"], abs=1e-8)


class TestReferenceInvariants:
    def test_hf_at_or_above_fci(self, h4, h2):
        for h in (h4, h2):
            ref = h.metadata["reference"]
            assert ref["hf_energy"] >= ref["fci_energy"]

    def test_fixture_fci_self_consistent(self, h4, h2):
        for h in (h4, h2):
            e = hamio.exact_ground_energy(h)
            assert e == pytest.approx(h.metadata["reference"]["fci_energy"], abs=1e-6)

    def test_h2_literature_value(self, h2):
        # H2 / STO-3G at 0.74 A
        assert hamio.exact_ground_energy(h2) == pytest.approx(-1.1373, abs=2e-3)
