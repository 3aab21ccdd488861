#!/usr/bin/env python3
"""
Tests for the VQE and ADAPT-VQE drivers on the bundled NaH Hamiltonian.
"""

import numpy as np
import pytest

from src.circuits.ansatz_compiler import AnsatzFamily, AnsatzSpec, build_ansatz, singlet_doubles
from src.optimizers import OptimizerConfig
from src.simulation.density_sim import DensityMatrix, NoiseModel, expectation, run_circuit
from src.simulation.exact_oracle import subspace_ground_energy
from src.utils.errors import ModelError, UnsupportedModelError
from src.vqe_driver import build_pool, pool_gradients, reference_occupation, run_adapt, run_vqe, run_vqe_randomized

NOISY = NoiseModel.from_p1(1e-2)
P1_GRID = [0.0, 1e-4, 1e-3, 1e-2]


@pytest.fixture(scope="module")
def noiseless_uccd(nah, nah_spectrum):
    return run_vqe(nah, AnsatzSpec.uccd(), NoiseModel.noiseless(), OptimizerConfig(), spectrum=nah_spectrum)


@pytest.fixture(scope="module")
def noisy_uccd(nah, nah_spectrum):
    return run_vqe(nah, AnsatzSpec.uccd(), NOISY, OptimizerConfig(), spectrum=nah_spectrum)


@pytest.fixture(scope="module")
def noise_grid(nah, nah_spectrum):
    """Optimized results for both fixed ansatz families over the default p1 grid."""
    return {
        (family, p1): run_vqe(nah, AnsatzSpec(family), NoiseModel.from_p1(p1), OptimizerConfig(),
                              spectrum=nah_spectrum)
        for family in (AnsatzFamily.UCCD, AnsatzFamily.SINGLET_UCCSD)
        for p1 in P1_GRID
    }


@pytest.fixture(scope="module")
def noiseless_adapt(nah, nah_spectrum):
    return run_adapt(nah, NoiseModel.noiseless(), OptimizerConfig(), spectrum=nah_spectrum)


@pytest.fixture(scope="module")
def noisy_adapt(nah, nah_spectrum):
    return run_adapt(nah, NOISY, OptimizerConfig(max_iterations=200), max_depth=4, spectrum=nah_spectrum)


class TestRunVqe:
    def test_noiseless_uccd(self, nah, noiseless_uccd):
        assert noiseless_uccd.fidelity >= 0.99
        assert noiseless_uccd.energy == pytest.approx(subspace_ground_energy(nah, [5, 10]), abs=1e-6)
        assert noiseless_uccd.gate_counts == (11, 6)
        assert noiseless_uccd.n_params == 1
        assert noiseless_uccd.energy >= noiseless_uccd.exact_e0 - 1e-9

    def test_result_is_self_consistent(self, nah, noiseless_uccd):
        circuit = build_ansatz(AnsatzSpec.uccd())
        rho = run_circuit(circuit, noiseless_uccd.parameters, NoiseModel.noiseless())
        assert expectation(rho, nah) == pytest.approx(noiseless_uccd.energy, abs=1e-10)
        weighted = sum(c.real * e for (c, _), e in zip(nah, noiseless_uccd.per_term_expectations))
        assert weighted == pytest.approx(noiseless_uccd.energy, abs=1e-10)
        assert noiseless_uccd.energy_error == pytest.approx(noiseless_uccd.energy - noiseless_uccd.exact_e0,
                                                            abs=1e-12)

    def test_noise_raises_energy_and_lowers_fidelity(self, noiseless_uccd, noisy_uccd):
        assert noisy_uccd.energy > noiseless_uccd.energy
        assert noisy_uccd.fidelity < noiseless_uccd.fidelity
        assert noisy_uccd.noise_p1 == 1e-2

    @pytest.mark.parametrize("family", [AnsatzFamily.UCCD, AnsatzFamily.SINGLET_UCCSD])
    def test_energy_rises_strictly_with_noise(self, noise_grid, family):
        energies = [noise_grid[family, p1].energy for p1 in P1_GRID]
        assert all(a < b for a, b in zip(energies, energies[1:])), energies

    @pytest.mark.parametrize("p1", P1_GRID[1:])
    def test_deeper_ansatz_suffers_more(self, noise_grid, p1):
        uccd = noise_grid[AnsatzFamily.UCCD, p1]
        uccsd = noise_grid[AnsatzFamily.SINGLET_UCCSD, p1]
        assert uccsd.energy_error >= uccd.energy_error
        assert uccsd.gate_counts[1] > uccd.gate_counts[1]

    def test_noiseless_grid_point_is_variational(self, noise_grid):
        for family in (AnsatzFamily.UCCD, AnsatzFamily.SINGLET_UCCSD):
            result = noise_grid[family, 0.0]
            assert result.energy >= result.exact_e0 - 1e-9

    def test_optimizer_parity(self, nah, nah_spectrum, noiseless_uccd):
        lbfgs = run_vqe(nah, AnsatzSpec.uccd(), NoiseModel.noiseless(), OptimizerConfig.for_kind("lbfgs"),
                        spectrum=nah_spectrum)
        assert lbfgs.energy == pytest.approx(noiseless_uccd.energy, abs=1e-5)
        assert lbfgs.optimizer_kind == "lbfgs"

    def test_adapt_needs_its_own_driver(self, nah):
        with pytest.raises(UnsupportedModelError):
            run_vqe(nah, AnsatzSpec.adapt([]), NoiseModel.noiseless(), OptimizerConfig())


class TestRandomizedVqe:
    def test_noiseless_randomized_runs_match_bare(self, nah, nah_spectrum, noiseless_uccd):
        summary = run_vqe_randomized(nah, AnsatzSpec.uccd(), NoiseModel.noiseless(), OptimizerConfig(),
                                     [0, 1, 2], spectrum=nah_spectrum)
        assert len(summary.runs) == 3
        assert [r.rc_seed for r in summary.runs] == [0, 1, 2]
        assert summary.mean_energy == pytest.approx(noiseless_uccd.energy, abs=1e-6)
        assert summary.inflation >= 0.0
        assert all(r.gate_counts[1] == 6 for r in summary.runs)

    def test_randomized_mean_is_not_below_bare_under_noise(self, nah, nah_spectrum, noisy_uccd):
        summary = run_vqe_randomized(nah, AnsatzSpec.uccd(), NOISY, OptimizerConfig(), list(range(10)),
                                     spectrum=nah_spectrum)
        assert summary.mean_energy >= noisy_uccd.energy
        assert 0.3 <= summary.inflation <= 0.7

    def test_needs_a_seed(self, nah):
        with pytest.raises(ValueError):
            run_vqe_randomized(nah, AnsatzSpec.uccd(), NoiseModel.noiseless(), OptimizerConfig(), [])


class TestPool:
    def test_four_qubit_pool(self):
        pool = build_pool(2, 2)
        assert [p.label for p in pool] == ["S(0->1)", "D(00->11)"]
        for op in pool:
            m = op.generator.to_matrix()
            assert np.allclose(m.conj().T, -m, atol=1e-12)

    def test_larger_pool_is_deduplicated(self):
        pool = build_pool(2, 4)
        generators = [p.generator for p in pool]
        for i, a in enumerate(generators):
            for b in generators[i + 1:]:
                assert not (a - b).is_zero() and not (a + b).is_zero()

    def test_invalid_models(self):
        with pytest.raises(ModelError):
            build_pool(0, 2)
        with pytest.raises(ModelError):
            build_pool(1, 3)

    def test_reference_occupation(self):
        assert reference_occupation(2, 2) == frozenset({0, 2})
        assert reference_occupation(2, 4) == frozenset({0, 3})


class TestPoolGradients:
    def test_ground_state_is_stationary(self, nah, nah_spectrum):
        rho = DensityMatrix.from_statevector(nah_spectrum.ground_state)
        assert np.allclose(pool_gradients(rho, nah, build_pool(2, 2)), 0.0, atol=1e-8)

    def test_maximally_mixed_state_has_no_gradient(self, nah):
        rho = DensityMatrix.maximally_mixed(4)
        assert np.allclose(pool_gradients(rho, nah, build_pool(2, 2)), 0.0, atol=1e-12)

    def test_doubles_gradient_at_reference(self, nah):
        pool = build_pool(2, 2)
        gradients = pool_gradients(DensityMatrix.basis_state(4, 5), nah, pool)
        assert abs(gradients[1]) > 0.1

        circuit = build_ansatz(AnsatzSpec.adapt([(singlet_doubles(), "t")]))
        noiseless = NoiseModel.noiseless()
        h = 1e-4
        finite = (expectation(run_circuit(circuit, [h], noiseless), nah)
                  - expectation(run_circuit(circuit, [-h], noiseless), nah)) / (2 * h)
        assert gradients[1] == pytest.approx(finite, abs=1e-6)


def assert_selection_is_argmax(result):
    for it in result.iterations:
        magnitudes = np.abs(it.gradients)
        assert it.selected == int(np.argmax(magnitudes))
        assert magnitudes[it.selected] == pytest.approx(magnitudes.max(), abs=0.0)
        assert it.selected_label == result.pool[it.selected].label


class TestAdapt:
    def test_noiseless_reaches_chemical_accuracy(self, noiseless_adapt):
        assert noiseless_adapt.converged
        assert noiseless_adapt.final_gradient_norm < 1e-2
        assert abs(noiseless_adapt.final.energy_error) < 1.6e-3
        assert noiseless_adapt.final.fidelity >= 0.99

    def test_doubles_selected_first(self, noiseless_adapt):
        first = noiseless_adapt.iterations[0]
        assert first.selected_label == "D(00->11)"
        assert first.iteration == 1
        assert len(first.parameters) == 1

    def test_trace_grows_one_parameter_per_step(self, noiseless_adapt):
        for k, it in enumerate(noiseless_adapt.iterations, start=1):
            assert len(it.parameters) == k
        assert noiseless_adapt.n_params == len(noiseless_adapt.iterations)

    def test_noiseless_energies_never_rise(self, noiseless_adapt):
        energies = [it.energy for it in noiseless_adapt.iterations]
        assert all(b <= a + 1e-9 for a, b in zip(energies, energies[1:])), energies

    def test_selected_generator_has_largest_gradient(self, noiseless_adapt, noisy_adapt):
        assert_selection_is_argmax(noiseless_adapt)
        assert_selection_is_argmax(noisy_adapt)

    def test_noiseless_norms_agree(self, noiseless_adapt):
        for it in noiseless_adapt.iterations:
            assert it.selection_gradient_norm == pytest.approx(it.gradient_norm, abs=1e-12)

    def test_noise_needs_at_least_as_many_parameters(self, noiseless_adapt, noisy_adapt):
        assert noisy_adapt.n_params >= noiseless_adapt.n_params
        assert noisy_adapt.final.metadata["stopping_gradients"] == "noiseless"

    def test_noisy_run_stops_on_noiseless_norm(self, nah, noisy_adapt):
        """The norm recorded for step k is the noiseless one at the step k-1 optimum."""
        assert len(noisy_adapt.iterations) >= 2
        first, second = noisy_adapt.iterations[:2]
        spec = AnsatzSpec.adapt([(noisy_adapt.pool[first.selected].generator, "theta_0")], 4,
                                reference_occupation(2, 2))
        rho = run_circuit(build_ansatz(spec), first.parameters, NoiseModel.noiseless())
        expected = float(np.linalg.norm(pool_gradients(rho, nah, noisy_adapt.pool)))
        assert second.gradient_norm == pytest.approx(expected, abs=1e-10)
        assert second.gradient_norm >= 1e-2

    def test_max_depth_is_respected(self, nah, nah_spectrum):
        result = run_adapt(nah, NoiseModel.noiseless(), OptimizerConfig(), grad_threshold=1e-12, max_depth=1,
                           spectrum=nah_spectrum)
        assert result.n_params == 1
        assert not result.converged
        assert result.final.metadata["max_depth"] == 1

    def test_argument_checks(self, nah):
        with pytest.raises(ValueError):
            run_adapt(nah, NoiseModel.noiseless(), OptimizerConfig(), grad_threshold=0.0)
        with pytest.raises(ValueError):
            run_adapt(nah, NoiseModel.noiseless(), OptimizerConfig(), gradient_norm="l1")
