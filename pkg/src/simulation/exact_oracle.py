#!/usr/bin/env python3
"""
NoisyLab - Exact Reference Calculations

Exact diagonalization of qubit Hamiltonians, dense matrix exponentials of
ansatz generators and brute-force energy scans. These are the ground truth
for fidelities and the oracles the tests compare against.
"""

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

try:
    from .density_sim import DensityMatrix, NoiseModel, expectation, run_circuit
    from ..circuits.ansatz_compiler import (AnsatzFamily, AnsatzSpec, UCCD_STRING, build_ansatz,
                                            singlet_doubles, singlet_singles)
    from ..operators.pauli import PauliString, PauliSum
    from ..utils.errors import BindingError, DimensionError, NumericalIntegrityError
    from ..utils.logger import get_logger
except ImportError:
    from simulation.density_sim import DensityMatrix, NoiseModel, expectation, run_circuit
    from circuits.ansatz_compiler import (AnsatzFamily, AnsatzSpec, UCCD_STRING, build_ansatz,
                                          singlet_doubles, singlet_singles)
    from operators.pauli import PauliString, PauliSum
    from utils.errors import BindingError, DimensionError, NumericalIntegrityError
    from utils.logger import get_logger


DEGENERACY_TOLERANCE = 1e-9


@dataclass
class SpectrumResult:
    """Full spectrum of a Hamiltonian; eigenvectors[:, k] belongs to eigenvalues[k]."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    degeneracy_tolerance: float = DEGENERACY_TOLERANCE

    @property
    def ground_energy(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def ground_state(self) -> np.ndarray:
        return self.eigenvectors[:, 0]

    @property
    def degeneracy(self) -> int:
        """Number of eigenvalues within the tolerance of the ground energy."""
        return int(np.sum(self.eigenvalues - self.eigenvalues[0] <= self.degeneracy_tolerance))

    @property
    def is_degenerate(self) -> bool:
        return self.degeneracy > 1

    def ground_projector(self) -> np.ndarray:
        vectors = self.eigenvectors[:, :self.degeneracy]
        return vectors @ vectors.conj().T

    def fidelity(self, rho: DensityMatrix) -> float:
        """Tr(P rho) with P the projector onto the (possibly degenerate) ground space."""
        value = complex(np.einsum('ij,ji->', self.ground_projector(), rho.data))
        if abs(value.imag) > 1e-10:
            raise NumericalIntegrityError(f"Fidelity has imaginary residue {value.imag:.3e}")
        return float(value.real)


def ground_state(h: PauliSum) -> SpectrumResult:
    """
    Diagonalize `h` exactly.

    Raises:
        NumericalIntegrityError: if h is not Hermitian
        CapacityError: above the dense qubit limit
    """
    matrix = h.to_matrix()
    if not np.allclose(matrix, matrix.conj().T, atol=1e-12, rtol=0):
        raise NumericalIntegrityError("Hamiltonian is not Hermitian")
    eigenvalues, eigenvectors = np.linalg.eigh(matrix)
    return SpectrumResult(eigenvalues, eigenvectors)


def subspace_ground_energy(h: PauliSum, basis_indices: Iterable[int]) -> float:
    """Lowest eigenvalue of h restricted to the span of the given basis states."""
    indices = sorted(set(basis_indices))
    dim = 2 ** h.n_qubits
    if not indices or any(not 0 <= i < dim for i in indices):
        raise DimensionError(f"Basis indices {indices} do not fit a {h.n_qubits}-qubit register")
    block = h.to_matrix()[np.ix_(indices, indices)]
    return float(np.linalg.eigvalsh(block)[0])


def _basis_vector(n_qubits: int, index: int) -> np.ndarray:
    dim = 2 ** n_qubits
    if not 0 <= index < dim:
        raise DimensionError(f"Reference index {index} outside register of {n_qubits} qubits")
    psi = np.zeros(dim, dtype=complex)
    psi[index] = 1.0
    return psi


def _hermitian_exp(matrix: np.ndarray, t: float) -> np.ndarray:
    """exp(-i t M) for Hermitian M via eigendecomposition."""
    values, vectors = np.linalg.eigh(matrix)
    return (vectors * np.exp(-1j * t * values)) @ vectors.conj().T


def matrix_exp_state(generator: Union[PauliSum, PauliString], angle: float, reference: int) -> np.ndarray:
    """exp(-i (angle/2) G)|reference> for a Hermitian generator G."""
    matrix = generator.to_matrix()
    if not np.allclose(matrix, matrix.conj().T, atol=1e-12, rtol=0):
        raise NumericalIntegrityError("Generator must be Hermitian")
    return _hermitian_exp(matrix, angle / 2) @ _basis_vector(generator.n_qubits, reference)


def product_exp_state(factors: Sequence[Tuple[PauliSum, float]], reference: int, n_qubits: int) -> np.ndarray:
    """
    Apply exp(angle_k * A_k) for anti-Hermitian A_k to |reference>, first factor first.
    """
    psi = _basis_vector(n_qubits, reference)
    for generator, angle in factors:
        if generator.n_qubits != n_qubits:
            raise DimensionError(f"Generator on {generator.n_qubits} qubits, register has {n_qubits}")
        # exp(angle * A) = exp(-i * angle * (iA)) with iA Hermitian
        psi = _hermitian_exp(1j * generator.to_matrix(), angle) @ psi
    return psi


def ansatz_state(spec: AnsatzSpec, parameters: Union[Mapping[str, float], Sequence[float]]) -> np.ndarray:
    """Noiseless ansatz state from matrix exponentials, independent of the compiler."""
    slots = spec.slots
    if isinstance(parameters, Mapping):
        values = dict(parameters)
    else:
        values = dict(zip(slots, parameters))
    missing = [s for s in slots if s not in values]
    if missing:
        raise BindingError(f"Missing parameters: {', '.join(missing)}")

    if spec.family is AnsatzFamily.UCCD:
        return matrix_exp_state(UCCD_STRING, values[slots[0]], spec.reference_index)
    if spec.family is AnsatzFamily.SINGLET_UCCSD:
        factors = [(singlet_doubles(), values[slots[1]]), (singlet_singles(), values[slots[0]])]
    else:
        factors = [(generator, values[slot]) for generator, slot in spec.generators]
    return product_exp_state(factors, spec.reference_index, spec.n_qubits)


@dataclass(frozen=True)
class ScanPoint:
    """One grid point of an energy scan."""

    parameters: Tuple[float, ...]
    energy: float
    fidelity: float


def uccd_grid(n_points: int = 629) -> List[Tuple[float]]:
    """Uniform one-parameter grid over [-pi, pi]."""
    return [(float(t),) for t in np.linspace(-np.pi, np.pi, n_points)]


def energy_scan(ansatz: AnsatzSpec, h: PauliSum, grid: Sequence[Sequence[float]], noise: NoiseModel,
                jobs: int = 1, spectrum: Optional[SpectrumResult] = None) -> List[ScanPoint]:
    """
    Simulate the compiled ansatz at every grid point.

    Args:
        ansatz: ansatz to compile
        h: Hamiltonian
        grid: parameter tuples in slot order
        noise: noise model
        jobs: worker threads; results keep grid order
        spectrum: precomputed exact spectrum for fidelities

    Returns:
        One ScanPoint per grid entry, in grid order
    """
    if not grid:
        raise ValueError("energy_scan needs a non-empty grid")

    circuit = build_ansatz(ansatz)
    spectrum = spectrum or ground_state(h)
    logger = get_logger()

    def evaluate(point: Sequence[float]) -> ScanPoint:
        rho = run_circuit(circuit, list(point), noise)
        return ScanPoint(tuple(float(v) for v in point), expectation(rho, h), spectrum.fidelity(rho))

    start = time.time()
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            points = list(pool.map(evaluate, grid))
    else:
        points = [evaluate(p) for p in grid]

    logger.log_performance("energy_scan", (time.time() - start) * 1000,
                           {"points": len(points), "p1": noise.p1, "jobs": jobs})
    return points


def scan_minimum(points: Sequence[ScanPoint]) -> ScanPoint:
    """Lowest-energy point; the first one wins ties."""
    return min(points, key=lambda p: p.energy)
