#!/usr/bin/env python3
"""
Tests for the exact reference calculations: diagonalization, matrix
exponentials and brute-force energy scans.
"""

import numpy as np
import pytest

from src.circuits.ansatz_compiler import AnsatzSpec, build_ansatz
from src.operators.pauli import PauliString, PauliSum
from src.simulation.density_sim import DensityMatrix, NoiseModel, fidelity, run_circuit
from src.simulation.exact_oracle import (SpectrumResult, ansatz_state, energy_scan, ground_state,
                                         matrix_exp_state, product_exp_state, scan_minimum, subspace_ground_energy,
                                         uccd_grid)
from src.utils.errors import DimensionError, NumericalIntegrityError


class TestGroundState:
    def test_bundled_spectrum(self, nah, nah_spectrum):
        m = nah.to_matrix()
        values, vectors = nah_spectrum.eigenvalues, nah_spectrum.eigenvectors
        norm = np.linalg.norm(m)
        assert np.all(np.diff(values) >= 0)
        assert nah_spectrum.ground_energy == pytest.approx(values.min())
        assert np.isclose(np.linalg.norm(nah_spectrum.ground_state), 1.0, atol=1e-12)
        residual = m @ nah_spectrum.ground_state - nah_spectrum.ground_energy * nah_spectrum.ground_state
        assert np.linalg.norm(residual) <= 1e-10 * norm
        assert np.allclose((vectors * values) @ vectors.conj().T, m, atol=1e-10 * norm)

    def test_power_iteration_agrees(self, nah, nah_spectrum):
        """Power iteration on (shift - H) lands on the same ground energy."""
        m = nah.to_matrix()
        shifted = (nah_spectrum.eigenvalues[-1] + 1.0) * np.eye(16) - m
        v = np.ones(16, dtype=complex) / 4
        for _ in range(5000):
            v = shifted @ v
            v /= np.linalg.norm(v)
        assert np.real(v.conj() @ m @ v) == pytest.approx(nah_spectrum.ground_energy, abs=1e-8)

    def test_ground_state_lies_below_reference(self, nah, nah_spectrum):
        assert nah_spectrum.ground_energy < nah.to_matrix()[5, 5].real
        assert not nah_spectrum.is_degenerate

    def test_degenerate_ground_space_uses_projector(self):
        h = PauliSum.from_terms(2, [(1.0, "ZI")])
        spectrum = ground_state(h)
        assert spectrum.degeneracy == 2
        rho = DensityMatrix.basis_state(2, 1)
        rho_other = DensityMatrix.basis_state(2, 3)
        assert spectrum.fidelity(rho) == pytest.approx(1.0)
        assert spectrum.fidelity(rho_other) == pytest.approx(1.0)

    def test_non_hermitian_rejected(self):
        with pytest.raises(NumericalIntegrityError):
            ground_state(PauliSum.from_terms(1, [(1j, "X")]))


class TestExponentials:
    def test_matrix_exp_state_uccd(self):
        psi = matrix_exp_state(PauliString("YXXX"), 1.1, 5)
        assert np.isclose(psi[5], np.cos(0.55)) and np.isclose(psi[10], -np.sin(0.55))

    def test_product_of_nothing_is_reference(self):
        psi = product_exp_state([], 5, 4)
        assert psi[5] == 1.0

    def test_reference_outside_register(self):
        with pytest.raises(DimensionError):
            matrix_exp_state(PauliString("ZZ"), 0.1, 4)

    @pytest.mark.parametrize("spec, values", [
        (AnsatzSpec.uccd(), [0.37]),
        (AnsatzSpec.singlet_uccsd(), [-0.2, 0.8]),
    ])
    def test_oracle_matches_compiled_circuit(self, spec, values):
        rho = run_circuit(build_ansatz(spec), values, NoiseModel.noiseless())
        assert fidelity(rho, ansatz_state(spec, values)) == pytest.approx(1.0, abs=1e-10)


class TestEnergyScan:
    @pytest.fixture(scope="class")
    def noiseless_scan(self, nah, nah_spectrum):
        return energy_scan(AnsatzSpec.uccd(), nah, uccd_grid(), NoiseModel.noiseless(), spectrum=nah_spectrum)

    def test_grid_shape(self):
        grid = uccd_grid()
        assert len(grid) == 629
        assert grid[0][0] == pytest.approx(-np.pi) and grid[-1][0] == pytest.approx(np.pi)

    def test_minimum_matches_two_state_block(self, nah, noiseless_scan):
        best = scan_minimum(noiseless_scan)
        assert best.energy == pytest.approx(subspace_ground_energy(nah, [5, 10]), abs=1e-6)
        assert best.parameters[0] == pytest.approx(0.10018, abs=0.02)

    def test_noisy_minimum_is_higher(self, nah, nah_spectrum, noiseless_scan):
        grid = [(t,) for t in np.linspace(-0.5, 0.5, 41)]
        noisy = energy_scan(AnsatzSpec.uccd(), nah, grid, NoiseModel.from_p1(1e-2), spectrum=nah_spectrum)
        assert scan_minimum(noisy).energy > scan_minimum(noiseless_scan).energy

    def test_threads_keep_grid_order(self, nah, nah_spectrum):
        grid = [(t,) for t in np.linspace(-1.0, 1.0, 9)]
        serial = energy_scan(AnsatzSpec.uccd(), nah, grid, NoiseModel.from_p1(1e-3), spectrum=nah_spectrum)
        threaded = energy_scan(AnsatzSpec.uccd(), nah, grid, NoiseModel.from_p1(1e-3), jobs=3,
                               spectrum=nah_spectrum)
        assert serial == threaded

    def test_empty_grid(self, nah):
        with pytest.raises(ValueError):
            energy_scan(AnsatzSpec.uccd(), nah, [], NoiseModel.noiseless())


def test_subspace_index_validation(nah):
    with pytest.raises(DimensionError):
        subspace_ground_energy(nah, [16])
    assert isinstance(ground_state(nah), SpectrumResult)
