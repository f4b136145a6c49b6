"""Pauli algebra against dense-matrix oracles, and measurement grouping."""

import itertools

import numpy as np
import pytest

from mpsvqe.errors import SizeGuardError
from mpsvqe.pauli import (Hamiltonian, PauliString, commutes, group_terms,
                          matrix_of, multiply, qubitwise_commutes)

ALL_1Q = ["I", "X", "Y", "Z"]


def strings(n):
    return ["".join(p) for p in itertools.product(ALL_1Q, repeat=n)]


class TestMultiply:
    def test_xy_gives_iz(self):
        phase, out = multiply(PauliString("X"), PauliString("Y"))
        assert phase == 1j and out.ops == "Z"

    def test_identity_is_neutral(self):
        for s in strings(3):
            phase, out = multiply(PauliString("III"), PauliString(s))
            assert phase == 1.0 and out.ops == s

    def test_xz_times_zx_matches_dense(self):
        a, b = PauliString("XZ"), PauliString("ZX")
        phase, out = multiply(a, b)
        dense = matrix_of(a) @ matrix_of(b)
        assert np.allclose(dense, phase * matrix_of(out))

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_exhaustive_dense_consistency(self, n):
        mats = {s: matrix_of(PauliString(s)) for s in strings(n)}
        for sa, sb in itertools.product(strings(n), repeat=2):
            phase, out = multiply(PauliString(sa), PauliString(sb))
            assert np.allclose(mats[sa] @ mats[sb], phase * mats[out.ops]), (sa, sb)

    @pytest.mark.parametrize("n", [1, 2])
    def test_exhaustive_associativity(self, n):
        for sa, sb, sc in itertools.product(strings(n), repeat=3):
            a, b, c = map(PauliString, (sa, sb, sc))
            p1, ab = multiply(a, b)
            p2, ab_c = multiply(ab, c)
            q1, bc = multiply(b, c)
            q2, a_bc = multiply(a, bc)
            assert ab_c == a_bc and np.isclose(p1 * p2, q1 * q2)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            multiply(PauliString("X"), PauliString("XX"))


class TestCommutes:
    def test_examples(self):
        assert commutes(PauliString("XX"), PauliString("ZZ"))
        assert not commutes(PauliString("XI"), PauliString("ZI"))

    def test_random_pairs_match_dense_commutator(self, rng):
        for _ in range(60):
            sa = "".join(rng.choice(ALL_1Q, 6))
            sb = "".join(rng.choice(ALL_1Q, 6))
            a, b = PauliString(sa), PauliString(sb)
            ma, mb = matrix_of(a), matrix_of(b)
            dense_zero = np.allclose(ma @ mb - mb @ ma, 0)
            assert commutes(a, b) == dense_zero

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_exhaustive_dense(self, n):
        mats = {s: matrix_of(PauliString(s)) for s in strings(n)}
        for sa, sb in itertools.product(strings(n), repeat=2):
            dense_zero = np.allclose(mats[sa] @ mats[sb] - mats[sb] @ mats[sa], 0)
            assert commutes(PauliString(sa), PauliString(sb)) == dense_zero


class TestQubitwiseCommutes:
    def test_disjoint_supports(self):
        assert qubitwise_commutes(PauliString("ZI"), PauliString("IZ"))

    def test_per_site_conflict_despite_global_commutation(self):
        assert not qubitwise_commutes(PauliString("XX"), PauliString("ZZ"))

    def test_qwc_implies_commutes(self, rng):
        found = 0
        for _ in range(500):
            sa = "".join(rng.choice(ALL_1Q, 5))
            sb = "".join(rng.choice(ALL_1Q, 5))
            a, b = PauliString(sa), PauliString(sb)
            if qubitwise_commutes(a, b):
                found += 1
                assert commutes(a, b)
        assert found > 0


class TestGroupTerms:
    def test_all_z_terms_share_one_group(self):
        h = Hamiltonian(2, [(1.0, "ZI"), (0.5, "IZ"), (0.25, "ZZ")])
        groups = group_terms(h)
        assert len(groups) == 1
        assert groups[0].basis == "ZZ"

    def test_conflicting_terms_split(self):
        h = Hamiltonian(1, [(1.0, "X"), (1.0, "Z")])
        assert len(group_terms(h)) == 2

    def test_h4_fixture_grouping(self, h4):
        groups = group_terms(h4)
        assert len(groups) < len(h4)
        # partition: every index exactly once
        seen = sorted(i for g in groups for i in g.member_indices)
        assert seen == list(range(len(h4)))
        # all intra-group pairs qubit-wise commute
        for g in groups:
            members = [h4.terms[i].string for i in g.member_indices]
            for a, b in itertools.combinations(members, 2):
                assert qubitwise_commutes(a, b)

    def test_deterministic(self, h4):
        g1 = group_terms(h4)
        g2 = group_terms(h4)
        assert [g.member_indices for g in g1] == [g.member_indices for g in g2]
        assert [g.basis for g in g1] == [g.basis for g in g2]

    def test_empty_rejected(self):
        h = Hamiltonian(1, [(1e-15, "Z")])  # dropped by merge tolerance
        with pytest.raises(ValueError):
            group_terms(h)


class TestMatrixOf:
    def test_z(self):
        assert np.allclose(matrix_of(PauliString("Z")), np.diag([1, -1]))

    def test_identity_2q(self):
        assert np.allclose(matrix_of(PauliString("II")), np.eye(4))

    def test_xz_hermitian_involutory(self):
        m = matrix_of(PauliString("XZ"))
        assert np.allclose(m, m.conj().T)
        assert np.allclose(m @ m, np.eye(4))

    def test_size_guard(self):
        with pytest.raises(SizeGuardError):
            matrix_of(PauliString("I" * 11))


class TestHamiltonian:
    def test_duplicates_merged(self):
        h = Hamiltonian(1, [(1.0, "Z"), (0.5, "Z"), (1.0, "X")])
        assert len(h) == 2
        coeffs = {t.string.ops: t.coeff for t in h}
        assert coeffs["Z"] == 1.5

    def test_tiny_coefficients_dropped(self):
        h = Hamiltonian(1, [(1.0, "Z"), (1e-13, "X")])
        assert len(h) == 1

    def test_qubit_mismatch_rejected(self):
        with pytest.raises(ValueError):
            Hamiltonian(2, [(1.0, "Z")])

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            Hamiltonian(1, [(float("nan"), "Z")])

    def test_dense_matrix_matches_kron(self, rng):
        terms = [(float(rng.standard_normal()), "".join(rng.choice(ALL_1Q, 3)))
                 for _ in range(8)]
        h = Hamiltonian(3, terms)
        expected = sum(t.coeff * matrix_of(t.string) for t in h)
        assert np.allclose(h.dense_matrix(), expected, atol=1e-12)
