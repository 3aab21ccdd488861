#!/usr/bin/env python3
"""
NoisyLab - VQE and ADAPT-VQE Driver

Wires compiled ansatz circuits, the density-matrix simulator and the
optimizers together:

- run_vqe: fixed ansatz (UCCD or singlet UCCSD), optionally randomly compiled
- run_vqe_randomized: the same averaged over several randomized compilations
- run_adapt: grows an ansatz one pool generator at a time, choosing the
  generator with the largest energy gradient Tr(rho [H, A_k]) and
  re-optimizing every parameter after each addition; growth stops once the
  noiseless gradient norm drops below the threshold
"""

import time
from dataclasses import dataclass, field, replace
from itertools import combinations_with_replacement
from typing import Any, Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

try:
    from .circuits.ansatz_compiler import AnsatzFamily, AnsatzSpec, build_ansatz
    from .circuits.circuit import Circuit
    from .circuits.randomized_compiling import RandomizationReport, randomization_report
    from .operators.fermion import singlet_double_generator, singlet_single_generator
    from .operators.pauli import PauliSum, commutator
    from .optimizers import Objective, OptimizerConfig, run_optimizer
    from .simulation.density_sim import (DensityMatrix, NoiseModel, expectation, run_circuit,
                                         term_expectations)
    from .simulation.exact_oracle import SpectrumResult, ground_state
    from .utils.errors import ModelError, NumericalIntegrityError, UnsupportedModelError
    from .utils.logger import get_logger
except ImportError:
    from circuits.ansatz_compiler import AnsatzFamily, AnsatzSpec, build_ansatz
    from circuits.circuit import Circuit
    from circuits.randomized_compiling import RandomizationReport, randomization_report
    from operators.fermion import singlet_double_generator, singlet_single_generator
    from operators.pauli import PauliSum, commutator
    from optimizers import Objective, OptimizerConfig, run_optimizer
    from simulation.density_sim import (DensityMatrix, NoiseModel, expectation, run_circuit,
                                        term_expectations)
    from simulation.exact_oracle import SpectrumResult, ground_state
    from utils.errors import ModelError, NumericalIntegrityError, UnsupportedModelError
    from utils.logger import get_logger


@dataclass
class VqeResult:
    """Outcome of one optimized circuit."""

    energy: float
    parameters: List[float]
    fidelity: float
    gate_counts: Tuple[int, int]
    evaluations: int
    optimizer_kind: str
    per_term_expectations: List[float]
    noise_p1: float
    ansatz_family: str
    converged: bool = True
    exact_e0: float = 0.0
    depth: int = 0
    rc_seed: Optional[int] = None
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def energy_error(self) -> float:
        return self.energy - self.exact_e0

    @property
    def n_params(self) -> int:
        return len(self.parameters)


@dataclass
class RandomizedVqeResult:
    """VQE repeated over randomized compilations of one ansatz."""

    runs: List[VqeResult]
    reports: List[RandomizationReport]

    @property
    def mean_energy(self) -> float:
        return float(np.mean([r.energy for r in self.runs]))

    @property
    def mean_fidelity(self) -> float:
        return float(np.mean([r.fidelity for r in self.runs]))

    @property
    def mean_single_qubit_gates(self) -> float:
        return float(np.mean([r.compiled_1q for r in self.reports]))

    @property
    def inflation(self) -> float:
        """Mean relative single-qubit gate growth over the bare circuit."""
        return float(np.mean([r.inflation for r in self.reports]))


@dataclass(frozen=True)
class PoolOperator:
    index: int
    label: str
    generator: PauliSum


@dataclass
class AdaptIteration:
    """
    One growth step: what was chosen, why, and where the optimizer ended.

    `gradients` are the selection gradients; `gradient_norm` is the noiseless
    norm the stopping test saw and `selection_gradient_norm` the norm of
    `gradients` (the two agree for noiseless runs).
    """

    iteration: int
    selected: int
    selected_label: str
    gradient_norm: float
    gradients: List[float]
    parameters: List[float]
    energy: float
    fidelity: float
    n_1q: int
    n_cnot: int
    evaluations: int
    selection_gradient_norm: float = 0.0


@dataclass
class AdaptResult:
    iterations: List[AdaptIteration]
    final: VqeResult
    converged: bool
    final_gradient_norm: float
    pool: List[PoolOperator] = field(default_factory=list)

    @property
    def n_params(self) -> int:
        return self.final.n_params


def _energy_function(circuit: Circuit, h: PauliSum, noise: NoiseModel):
    def energy(parameters: np.ndarray) -> float:
        return expectation(run_circuit(circuit, parameters, noise), h)
    return energy


def evaluate_circuit(circuit: Circuit, parameters: Sequence[float], h: PauliSum, noise: NoiseModel,
                     spectrum: SpectrumResult, family: str, optimizer_kind: str = "",
                     evaluations: int = 0, converged: bool = True) -> VqeResult:
    """Simulate the circuit at `parameters` and assemble a VqeResult."""
    rho = run_circuit(circuit, list(parameters), noise)
    return VqeResult(
        energy=expectation(rho, h),
        parameters=[float(p) for p in parameters],
        fidelity=spectrum.fidelity(rho),
        gate_counts=circuit.gate_counts(),
        evaluations=evaluations,
        optimizer_kind=optimizer_kind,
        per_term_expectations=term_expectations(rho, h),
        noise_p1=noise.p1,
        ansatz_family=family,
        converged=converged,
        exact_e0=spectrum.ground_energy,
        depth=circuit.depth(),
    )


def run_vqe(h: PauliSum, spec: AnsatzSpec, noise: NoiseModel, cfg: OptimizerConfig,
            rc_seed: Optional[int] = None, spectrum: Optional[SpectrumResult] = None) -> VqeResult:
    """
    Optimize a fixed ansatz under noise.

    Args:
        h: Hamiltonian
        spec: UCCD or SINGLET_UCCSD ansatz
        noise: noise model
        cfg: optimizer configuration
        rc_seed: randomly compile the circuit with this seed
        spectrum: precomputed exact spectrum of h

    Returns:
        VqeResult at the best parameters found
    """
    if spec.family is AnsatzFamily.ADAPT:
        raise UnsupportedModelError("run_vqe takes a fixed ansatz; use run_adapt for ADAPT")
    logger = get_logger()
    spectrum = spectrum or ground_state(h)

    circuit = build_ansatz(spec)
    metadata: Dict[str, Any] = {}
    if rc_seed is not None:
        circuit, report = randomization_report(circuit, rc_seed)
        metadata["rc_inflation"] = report.inflation

    start = time.time()
    objective = Objective(_energy_function(circuit, h, noise), len(circuit.parameter_slots))
    outcome = run_optimizer(objective, cfg)

    result = evaluate_circuit(circuit, outcome.parameters, h, noise, spectrum, spec.family.value,
                              cfg.kind.value, outcome.evaluations, outcome.converged)
    result.rc_seed = rc_seed
    result.metadata = {**outcome.metadata, **metadata}

    logger.log_performance("run_vqe", (time.time() - start) * 1000,
                           {"ansatz": spec.family.value, "p1": noise.p1, "evaluations": outcome.evaluations})
    return result


def run_vqe_randomized(h: PauliSum, spec: AnsatzSpec, noise: NoiseModel, cfg: OptimizerConfig,
                       seeds: Sequence[int], spectrum: Optional[SpectrumResult] = None) -> RandomizedVqeResult:
    """run_vqe once per randomized-compiling seed."""
    if not seeds:
        raise ValueError("run_vqe_randomized needs at least one seed")
    spectrum = spectrum or ground_state(h)
    bare = build_ansatz(spec)

    runs, reports = [], []
    for seed in seeds:
        _, report = randomization_report(bare, seed)
        reports.append(report)
        runs.append(run_vqe(h, spec, noise, cfg, rc_seed=seed, spectrum=spectrum))

    summary = RandomizedVqeResult(runs, reports)
    get_logger().info(
        f"RC x{len(seeds)}: mean energy {summary.mean_energy:.10f} Ha, mean fidelity {summary.mean_fidelity:.6f}, "
        f"single-qubit inflation {summary.inflation:+.1%}", "RC"
    )
    return summary


def reference_occupation(n_occupied: int, n_virtual: int) -> FrozenSet[int]:
    """Occupied qubits of the closed-shell reference in the spin-blocked layout."""
    n_spatial = (n_occupied + n_virtual) // 2
    occ_spatial = n_occupied // 2
    return frozenset(list(range(occ_spatial)) + [n_spatial + k for k in range(occ_spatial)])


def build_pool(n_occupied: int, n_virtual: int) -> List[PoolOperator]:
    """
    Singlet-adapted singles and doubles, JW-transformed and deduplicated.

    Args:
        n_occupied: occupied spin orbitals (even, closed shell)
        n_virtual: virtual spin orbitals (even)

    Returns:
        Pool operators in construction order: singles, then doubles

    Raises:
        ModelError: nothing to excite, or an open-shell count
    """
    if n_occupied <= 0 or n_virtual <= 0:
        raise ModelError(f"Empty pool for {n_occupied} occupied and {n_virtual} virtual spin orbitals")
    if n_occupied % 2 or n_virtual % 2:
        raise ModelError("Singlet-adapted pools need even (closed-shell) spin-orbital counts")

    n_spatial = (n_occupied + n_virtual) // 2
    occupied = range(n_occupied // 2)
    virtual = range(n_occupied // 2, n_spatial)

    candidates: List[Tuple[str, PauliSum]] = []
    for i in occupied:
        for a in virtual:
            candidates.append((f"S({i}->{a})", singlet_single_generator(i, a, n_spatial)))
    for i, j in combinations_with_replacement(occupied, 2):
        for a, b in combinations_with_replacement(virtual, 2):
            candidates.append((f"D({i}{j}->{a}{b})", singlet_double_generator(i, j, a, b, n_spatial)))

    pool: List[PoolOperator] = []
    for label, generator in candidates:
        if generator.is_zero():
            continue
        if any((generator - p.generator).is_zero() or (generator + p.generator).is_zero() for p in pool):
            continue
        pool.append(PoolOperator(len(pool), label, generator))

    if not pool:
        raise ModelError("Operator pool is empty")
    return pool


def pool_gradients(rho: DensityMatrix, h: PauliSum, pool: Sequence[PoolOperator]) -> np.ndarray:
    """
    g_k = Tr(rho [H, A_k]), the derivative of the energy when exp(theta A_k)
    is appended to the circuit, at theta = 0.
    """
    gradients = np.zeros(len(pool))
    for k, op in enumerate(pool):
        value = complex(np.einsum('ij,ji->', rho.data, commutator(h, op.generator).to_matrix()))
        if abs(value.imag) > 1e-10:
            raise NumericalIntegrityError(f"Gradient of {op.label} has imaginary residue {value.imag:.3e}")
        gradients[k] = value.real
    return gradients


def _norm(gradients: np.ndarray, kind: str) -> float:
    if gradients.size == 0:
        return 0.0
    return float(np.max(np.abs(gradients)) if kind == "linf" else np.linalg.norm(gradients))


def run_adapt(h: PauliSum, noise: NoiseModel, cfg: OptimizerConfig, grad_threshold: float = 1e-2,
              max_depth: int = 20, gradient_norm: str = "l2", noiseless_gradients: bool = False,
              n_electrons: int = 2, spectrum: Optional[SpectrumResult] = None) -> AdaptResult:
    """
    ADAPT-VQE from the Hartree-Fock reference.

    Generators are selected with the gradients of the state actually
    prepared (noisy unless `noiseless_gradients`). The stopping test always
    uses the gradient norm of the noiseless state at the same parameters,
    so the noise level never shortens the ansatz.

    Args:
        h: Hamiltonian on 2 * n_spatial qubits
        noise: noise model used for the optimization
        cfg: optimizer configuration (its initial point is ignored)
        grad_threshold: stop once the noiseless gradient norm falls below this
        max_depth: maximum number of generators
        gradient_norm: "l2" or "linf"
        noiseless_gradients: select generators with noiseless gradients too
        n_electrons: electrons in the closed-shell reference
        spectrum: precomputed exact spectrum of h

    Returns:
        AdaptResult; converged is False when max_depth was exhausted first
    """
    if grad_threshold <= 0:
        raise ValueError("grad_threshold must be positive")
    if max_depth < 1:
        raise ValueError("max_depth must be at least 1")
    if gradient_norm not in ("l2", "linf"):
        raise ValueError(f"Unknown gradient norm {gradient_norm!r}")

    logger = get_logger()
    spectrum = spectrum or ground_state(h)
    pool = build_pool(n_electrons, h.n_qubits - n_electrons)
    occupation = reference_occupation(n_electrons, h.n_qubits - n_electrons)
    noiseless = NoiseModel.noiseless()
    selection_noise = noiseless if noiseless_gradients else noise

    generators: List[Tuple[PauliSum, str]] = []
    parameters: List[float] = []
    iterations: List[AdaptIteration] = []
    evaluations = 0
    last_outcome = None

    def current_circuit() -> Circuit:
        return build_ansatz(AnsatzSpec.adapt(generators, h.n_qubits, occupation))

    converged = False
    circuit = current_circuit()
    norm = 0.0
    for step in range(1, max_depth + 2):
        reference = pool_gradients(run_circuit(circuit, parameters, noiseless), h, pool)
        if selection_noise.is_noiseless:
            gradients = reference
        else:
            gradients = pool_gradients(run_circuit(circuit, parameters, selection_noise), h, pool)
        norm = _norm(reference, gradient_norm)
        if norm < grad_threshold:
            converged = True
            break
        if step > max_depth:
            break

        chosen = int(np.argmax(np.abs(gradients)))
        generators.append((pool[chosen].generator, f"theta_{step - 1}"))
        circuit = current_circuit()

        warm_start = parameters + [0.0]
        step_cfg = replace(cfg, initial_point=warm_start)
        objective = Objective(_energy_function(circuit, h, noise), len(warm_start), name=f"adapt{step}")
        last_outcome = run_optimizer(objective, step_cfg)
        parameters = [float(p) for p in last_outcome.parameters]
        evaluations += last_outcome.evaluations

        rho = run_circuit(circuit, parameters, noise)
        n_1q, n_cnot = circuit.gate_counts()
        record = AdaptIteration(step, chosen, pool[chosen].label, norm, gradients.tolist(), list(parameters),
                                expectation(rho, h), spectrum.fidelity(rho), n_1q, n_cnot,
                                last_outcome.evaluations, _norm(gradients, gradient_norm))
        iterations.append(record)
        logger.log_adapt_iteration(step, record.selected_label, norm, record.energy, len(parameters))

    if not converged:
        logger.warning(f"ADAPT stopped at max depth {max_depth} with gradient norm {norm:.3e}", "ADAPT")

    final = evaluate_circuit(circuit, parameters, h, noise, spectrum, AnsatzFamily.ADAPT.value,
                             cfg.kind.value, evaluations, converged)
    final.metadata = dict(last_outcome.metadata) if last_outcome else cfg.metadata()
    final.metadata.update({"grad_threshold": grad_threshold, "max_depth": max_depth,
                           "gradient_norm": gradient_norm, "noiseless_gradients": noiseless_gradients,
                           "stopping_gradients": "noiseless"})
    return AdaptResult(iterations, final, converged, norm, pool)
