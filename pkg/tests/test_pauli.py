#!/usr/bin/env python3
"""
Tests for the Pauli algebra: string products, canonical sums, dense matrices
and commutators.
"""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from src.ham_io import bundled_nah
from src.operators.pauli import (PAULI_LETTERS, PauliString, PauliSum, commutator, multiply,
                                 multiply_letters, to_matrix)
from src.utils.errors import CapacityError, DimensionError


def pauli_strings(max_qubits=4):
    return st.integers(1, max_qubits).flatmap(
        lambda n: st.tuples(
            st.text(alphabet=PAULI_LETTERS, min_size=n, max_size=n),
            st.text(alphabet=PAULI_LETTERS, min_size=n, max_size=n),
            st.sampled_from([1, -1, 1j, -1j]),
            st.sampled_from([1, -1, 1j, -1j]),
        )
    )


class TestPauliString:
    def test_y_times_z_is_i_x(self):
        """Y0 . Z0 = +i X0, checked against 2x2 matrices."""
        product = multiply(PauliString("Y"), PauliString("Z"))
        assert product.letters == "X"
        assert product.phase == 1j
        assert np.allclose(product.to_matrix(), PauliString("Y").to_matrix() @ PauliString("Z").to_matrix())

    def test_letter_table(self):
        assert multiply_letters("X", "Y") == (1j, "Z")
        assert multiply_letters("Z", "Z") == (1, "I")
        assert multiply_letters("I", "Y") == (1, "Y")

    @given(st.text(alphabet=PAULI_LETTERS, min_size=1, max_size=6))
    def test_square_is_identity(self, letters):
        square = PauliString(letters) * PauliString(letters)
        assert square.is_identity()
        assert square.phase == 1

    @given(pauli_strings())
    def test_matrix_is_a_homomorphism(self, case):
        a_letters, b_letters, a_phase, b_phase = case
        a, b = PauliString(a_letters, a_phase), PauliString(b_letters, b_phase)
        assert np.allclose(to_matrix(a * b), a.to_matrix() @ b.to_matrix(), atol=1e-12)

    @given(pauli_strings())
    def test_commutes_with_matches_matrices(self, case):
        a, b = PauliString(case[0]), PauliString(case[1])
        ma, mb = a.to_matrix(), b.to_matrix()
        assert a.commutes_with(b) == np.allclose(ma @ mb, mb @ ma)

    def test_little_endian_layout(self):
        """X on qubit 0 flips the least significant bit."""
        m = PauliString("XI").to_matrix()
        assert m[1, 0] == 1 and m[2, 0] == 0

    def test_invalid_letter(self):
        with pytest.raises(ValueError):
            PauliString("XQ")

    def test_invalid_phase(self):
        with pytest.raises(ValueError):
            PauliString("X", 2)

    def test_length_mismatch(self):
        with pytest.raises(DimensionError):
            multiply(PauliString("XX"), PauliString("X"))

    def test_from_sparse(self):
        assert PauliString.from_sparse(4, {0: "Y", 3: "X"}).letters == "YIIX"
        with pytest.raises(DimensionError):
            PauliString.from_sparse(2, {2: "X"})

    def test_str_shows_phase(self):
        assert str(PauliString("XZ", -1j)) == "-iXZ"

    def test_dense_limit(self):
        with pytest.raises(CapacityError):
            PauliString("I" * 11).to_matrix()


class TestPauliSum:
    def test_merges_and_sorts(self):
        s = PauliSum.from_terms(2, [(0.5, "ZI"), (0.25, "XX"), (0.5, "ZI")])
        assert [k for _, k in s] == ["XX", "ZI"]
        assert s.coefficient("ZI") == 1.0

    def test_drops_cancelled_terms(self):
        s = PauliSum.from_terms(1, [(1.0, "X"), (-1.0, "X"), (2.0, "Z")])
        assert len(s) == 1
        assert s.coefficient("X") == 0

    def test_phase_moves_into_coefficient(self):
        s = PauliSum.from_terms(1, [(2.0, PauliString("Y", -1j))])
        assert s.coefficient("Y") == -2j

    def test_product_matches_dense(self):
        a = PauliSum.from_terms(2, [(0.3, "XZ"), (1.2, "YI")])
        b = PauliSum.from_terms(2, [(-0.7, "ZZ"), (0.1j, "IX")])
        assert np.allclose((a * b).to_matrix(), a.to_matrix() @ b.to_matrix(), atol=1e-12)

    def test_adjoint_and_scale(self):
        s = PauliSum.from_terms(1, [(1j, "X")])
        assert np.allclose(s.adjoint().to_matrix(), s.to_matrix().conj().T)
        assert (s - s.scale(1.0)).is_zero()

    def test_dimension_checks(self):
        with pytest.raises(DimensionError):
            PauliSum.from_terms(2, [(1.0, "XXX")])
        with pytest.raises(DimensionError):
            PauliSum.zero(2) + PauliSum.zero(3)

    def test_bundled_hamiltonian_is_hermitian(self):
        h = bundled_nah()
        assert len(h) == 27
        assert h.has_real_coefficients
        m = h.to_matrix()
        assert np.allclose(m, m.conj().T, atol=1e-12)


class TestCommutator:
    def test_commuting_strings_give_empty_sum(self):
        a = PauliSum.from_terms(2, [(1.0, "ZZ")])
        b = PauliSum.from_terms(2, [(1.0, "XX")])
        assert commutator(a, b).is_zero()

    def test_hamiltonian_with_doubles_string(self):
        """[H, Y0X1X2X3] for the bundled Hamiltonian against the 16x16 commutator."""
        h = bundled_nah()
        g = PauliSum.from_string(PauliString("YXXX"))
        c = commutator(h, g)
        hm, gm = h.to_matrix(), g.to_matrix()
        assert not c.is_zero()
        assert np.allclose(c.to_matrix(), hm @ gm - gm @ hm, atol=1e-12)
