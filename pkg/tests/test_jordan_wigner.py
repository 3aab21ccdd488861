#!/usr/bin/env python3
"""
Tests for fermionic operators and the Jordan-Wigner mapping.
"""

import numpy as np
import pytest

from src.operators.fermion import (FermionOp, anti_hermitian_excitation, excitation_operator, jordan_wigner,
                                   singlet_double_generator, singlet_single_generator, spin_orbital)
from src.operators.pauli import PauliSum
from src.utils.errors import DimensionError


def dense(op: FermionOp, n: int) -> np.ndarray:
    return jordan_wigner(op, n).to_matrix()


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_canonical_anticommutation(n):
    """{a_p, a_q^dagger} = delta_pq and {a_p, a_q} = 0."""
    identity = np.eye(2 ** n)
    for p in range(n):
        a_p = dense(FermionOp.annihilation(p), n)
        for q in range(n):
            a_q = dense(FermionOp.annihilation(q), n)
            a_q_dag = dense(FermionOp.creation(q), n)
            expected = identity if p == q else np.zeros_like(identity)
            assert np.allclose(a_p @ a_q_dag + a_q_dag @ a_p, expected, atol=1e-12)
            assert np.allclose(a_p @ a_q + a_q @ a_p, 0, atol=1e-12)


def test_number_operator_is_occupation_of_one():
    """a_p^dagger a_p -> (I - Z_p) / 2: occupied orbitals sit in |1>."""
    n = 3
    for p in range(n):
        number = jordan_wigner(FermionOp.creation(p) * FermionOp.annihilation(p), n)
        z = ["I"] * n
        z[p] = "Z"
        expected = PauliSum.from_terms(n, [(0.5, "I" * n), (-0.5, "".join(z))])
        assert (number - expected).is_zero()


def test_creation_fills_the_empty_mode():
    a_dag = dense(FermionOp.creation(1), 2)
    vacuum = np.zeros(4)
    vacuum[0] = 1.0
    filled = a_dag @ vacuum
    assert np.isclose(abs(filled[2]), 1.0)


def test_adjoint_of_creation_is_annihilation():
    assert np.allclose(dense(FermionOp.creation(2).adjoint(), 3), dense(FermionOp.annihilation(2), 3))


def test_mode_outside_register():
    with pytest.raises(DimensionError):
        jordan_wigner(FermionOp.creation(4), 4)
    with pytest.raises(DimensionError):
        FermionOp.term(1.0, (-1, True))


def test_excitation_operator_order():
    t = excitation_operator([0, 2], [1, 3])
    assert t.terms[0][1] == ((1, True), (3, True), (0, False), (2, False))


@pytest.mark.parametrize("generator", [
    anti_hermitian_excitation([0], [1], 4),
    anti_hermitian_excitation([0, 2], [1, 3], 4),
    singlet_single_generator(0, 1, 2),
    singlet_double_generator(0, 0, 1, 1, 2),
])
def test_generators_are_anti_hermitian(generator):
    m = generator.to_matrix()
    assert generator.has_imaginary_coefficients
    assert np.allclose(m.conj().T, -m, atol=1e-12)


def test_pair_excitation_maps_reference_to_doubly_excited():
    """The closed-shell doubles generator sends |5> (qubits 0, 2) to -|10> (qubits 1, 3)."""
    g = singlet_double_generator(0, 0, 1, 1, 2).to_matrix()
    reference = np.zeros(16)
    reference[5] = 1.0
    image = g @ reference
    assert np.isclose(image[10], -1.0)
    assert np.isclose(np.linalg.norm(image), 1.0)


def test_generators_conserve_particle_number():
    number = sum(dense(FermionOp.creation(p) * FermionOp.annihilation(p), 4) for p in range(4))
    for generator in (singlet_single_generator(0, 1, 2), singlet_double_generator(0, 0, 1, 1, 2)):
        g = generator.to_matrix()
        assert np.allclose(number @ g, g @ number, atol=1e-12)


def test_spin_blocked_layout():
    assert spin_orbital(0, False, 2) == 0
    assert spin_orbital(0, True, 2) == 2
    assert spin_orbital(1, True, 2) == 3
