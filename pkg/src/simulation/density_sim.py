#!/usr/bin/env python3
"""
NoisyLab - Density-Matrix Simulator

Dense superoperator simulation of gate circuits under per-gate depolarizing
noise. Every gate conjugates the state by its embedded unitary and is then
followed by its noise channel:

- single-qubit gates H, X, Y, RX, RY, U1Q: depolarize(q, p1)
- Z and RZ: no noise while the diagonal exemption is on
- CNOT: depolarize(target, p2) then depolarize(control, p2)

The single-qubit channel is the trace-preserving depolarizer

    rho -> (1 - p) rho + (p / 3) (X rho X + Y rho Y + Z rho Z)
"""

from dataclasses import dataclass
from typing import List, Mapping, Optional, Sequence, Union

import numpy as np

try:
    from ..circuits.circuit import Circuit, Gate, GateKind, pauli_operator
    from ..operators.pauli import PauliString, PauliSum
    from ..utils.errors import (DimensionError, NoiseModelError, NormalizationError,
                                NumericalIntegrityError)
except ImportError:
    from circuits.circuit import Circuit, Gate, GateKind, pauli_operator
    from operators.pauli import PauliString, PauliSum
    from utils.errors import (DimensionError, NoiseModelError, NormalizationError,
                              NumericalIntegrityError)


HERMITIAN_TOLERANCE = 1e-12
TRACE_TOLERANCE = 1e-12
PSD_TOLERANCE = 1e-10
IMAGINARY_TOLERANCE = 1e-10
NORM_TOLERANCE = 1e-12


@dataclass
class DensityMatrix:
    """2^n x 2^n density operator in the little-endian basis."""

    n_qubits: int
    data: np.ndarray

    def __post_init__(self):
        dim = 2 ** self.n_qubits
        self.data = np.asarray(self.data, dtype=complex)
        if self.data.shape != (dim, dim):
            raise DimensionError(f"Expected a {dim}x{dim} matrix for {self.n_qubits} qubits, got {self.data.shape}")

    @classmethod
    def basis_state(cls, n_qubits: int, index: int = 0) -> "DensityMatrix":
        dim = 2 ** n_qubits
        if not 0 <= index < dim:
            raise DimensionError(f"Basis index {index} outside register of {n_qubits} qubits")
        data = np.zeros((dim, dim), dtype=complex)
        data[index, index] = 1.0
        return cls(n_qubits, data)

    @classmethod
    def zero_state(cls, n_qubits: int) -> "DensityMatrix":
        return cls.basis_state(n_qubits, 0)

    @classmethod
    def from_statevector(cls, psi: Sequence[complex]) -> "DensityMatrix":
        psi = np.asarray(psi, dtype=complex)
        n_qubits = int(round(np.log2(psi.size)))
        if 2 ** n_qubits != psi.size:
            raise DimensionError(f"State vector length {psi.size} is not a power of two")
        _check_normalized(psi)
        return cls(n_qubits, np.outer(psi, psi.conj()))

    @classmethod
    def maximally_mixed(cls, n_qubits: int) -> "DensityMatrix":
        dim = 2 ** n_qubits
        return cls(n_qubits, np.eye(dim, dtype=complex) / dim)

    @property
    def trace(self) -> float:
        return float(np.real(np.trace(self.data)))

    @property
    def purity(self) -> float:
        """Tr(rho^2)."""
        return float(np.real(np.einsum('ij,ji->', self.data, self.data)))

    def copy(self) -> "DensityMatrix":
        return DensityMatrix(self.n_qubits, self.data.copy())

    def check(self, check_positivity: bool = False) -> "DensityMatrix":
        """
        Verify Hermiticity and unit trace (and optionally positivity).

        Raises:
            NumericalIntegrityError: if an invariant is violated
        """
        if not np.allclose(self.data, self.data.conj().T, atol=HERMITIAN_TOLERANCE, rtol=0):
            raise NumericalIntegrityError("Density matrix is not Hermitian")
        if abs(np.trace(self.data) - 1.0) > TRACE_TOLERANCE:
            raise NumericalIntegrityError(f"Density matrix trace {self.trace!r} differs from 1")
        if check_positivity:
            smallest = float(np.linalg.eigvalsh(self.data)[0])
            if smallest < -PSD_TOLERANCE:
                raise NumericalIntegrityError(f"Density matrix has negative eigenvalue {smallest:.3e}")
        return self


@dataclass(frozen=True)
class NoiseModel:
    """Depolarizing probabilities for single- and two-qubit gates."""

    p1: float = 0.0
    p2: float = 0.0
    exempt_diagonal: bool = True

    def __post_init__(self):
        for name in ('p1', 'p2'):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise NoiseModelError(f"{name} must lie in [0, 1], got {value}")

    @classmethod
    def from_p1(cls, p1: float, two_qubit_ratio: float = 10.0, exempt_diagonal: bool = True) -> "NoiseModel":
        """
        Standard construction p2 = ratio * p1.

        Raises:
            NoiseModelError: if p1 < 0 or the scaled two-qubit level exceeds 1
        """
        if p1 < 0.0 or p1 * two_qubit_ratio > 1.0 + 1e-15:
            raise NoiseModelError(
                f"p1 = {p1} gives p2 = {p1 * two_qubit_ratio}; p1 must lie in [0, {1.0 / two_qubit_ratio:g}]"
            )
        return cls(p1, min(1.0, p1 * two_qubit_ratio), exempt_diagonal)

    @classmethod
    def noiseless(cls) -> "NoiseModel":
        return cls(0.0, 0.0)

    @property
    def is_noiseless(self) -> bool:
        return self.p1 == 0.0 and self.p2 == 0.0


def depolarize(rho: DensityMatrix, qubit: int, p: float) -> DensityMatrix:
    """(1 - p) rho + (p/3) sum over X, Y, Z of sigma_q rho sigma_q."""
    if not 0.0 <= p <= 1.0:
        raise NoiseModelError(f"Depolarizing probability must lie in [0, 1], got {p}")
    if not 0 <= qubit < rho.n_qubits:
        raise DimensionError(f"Qubit {qubit} outside register of {rho.n_qubits}")
    if p == 0.0:
        return rho.copy()

    n = rho.n_qubits
    mixed = sum(
        pauli_operator(letter, qubit, n) @ rho.data @ pauli_operator(letter, qubit, n)
        for letter in 'XYZ'
    )
    return DensityMatrix(n, (1.0 - p) * rho.data + (p / 3.0) * mixed)


def _noise_level(gate: Gate, noise: NoiseModel) -> float:
    if gate.kind is GateKind.CNOT:
        return noise.p2
    if noise.exempt_diagonal and gate.is_diagonal:
        return 0.0
    return noise.p1


def apply_gate(rho: DensityMatrix, g: Gate, noise: NoiseModel,
               values: Optional[Mapping[str, float]] = None) -> DensityMatrix:
    """
    Conjugate by the gate, then apply its depolarizing channel.

    Raises:
        BindingError: symbolic angle without a value
        DimensionError: gate outside the register
    """
    u = g.operator(rho.n_qubits, values)
    out = DensityMatrix(rho.n_qubits, u @ rho.data @ u.conj().T)

    p = _noise_level(g, noise)
    if p > 0.0:
        if g.kind is GateKind.CNOT:
            control, target = g.qubits
            out = depolarize(out, target, p)
            out = depolarize(out, control, p)
        else:
            out = depolarize(out, g.qubits[0], p)
    return out


def run_circuit(c: Circuit, bindings: Union[Mapping[str, float], Sequence[float], None],
                noise: NoiseModel, initial: Optional[DensityMatrix] = None) -> DensityMatrix:
    """
    Simulate `c` gate by gate.

    Args:
        c: circuit to run
        bindings: values for every parameter slot, by name or in slot order
        noise: depolarizing model
        initial: starting state, |0...0> by default

    Returns:
        Final density matrix (Hermitian, unit trace)
    """
    values = c.values_from(bindings)
    rho = initial.copy() if initial is not None else DensityMatrix.zero_state(c.n_qubits)
    if rho.n_qubits != c.n_qubits:
        raise DimensionError(f"Initial state has {rho.n_qubits} qubits, circuit has {c.n_qubits}")

    for gate in c.gates:
        rho = apply_gate(rho, gate, noise, values)
    return rho.check()


def _real(value: complex, what: str) -> float:
    if abs(value.imag) > IMAGINARY_TOLERANCE:
        raise NumericalIntegrityError(f"{what} has imaginary residue {value.imag:.3e}")
    return float(value.real)


def expectation(rho: DensityMatrix, obs: Union[PauliSum, PauliString]) -> float:
    """
    Tr(rho * obs) for a Hermitian observable.

    Raises:
        DimensionError: mismatched qubit counts
        NumericalIntegrityError: imaginary part above 1e-10
    """
    if obs.n_qubits != rho.n_qubits:
        raise DimensionError(f"Observable on {obs.n_qubits} qubits, state on {rho.n_qubits}")
    value = np.einsum('ij,ji->', rho.data, obs.to_matrix())
    return _real(complex(value), "Expectation value")


def term_expectations(rho: DensityMatrix, obs: PauliSum) -> List[float]:
    """Tr(rho * P_j) for every term of `obs`, in term order (coefficients excluded)."""
    if obs.n_qubits != rho.n_qubits:
        raise DimensionError(f"Observable on {obs.n_qubits} qubits, state on {rho.n_qubits}")
    return [
        _real(complex(np.einsum('ij,ji->', rho.data, PauliString(letters).to_matrix())), f"<{letters}>")
        for _, letters in obs
    ]


def _check_normalized(psi: np.ndarray):
    norm = float(np.linalg.norm(psi))
    if abs(norm - 1.0) > NORM_TOLERANCE:
        raise NormalizationError(f"Target state has norm {norm!r}, expected 1")


def fidelity(rho: DensityMatrix, psi: Sequence[complex]) -> float:
    """<psi|rho|psi> for a normalized pure target."""
    psi = np.asarray(psi, dtype=complex)
    if psi.size != rho.data.shape[0]:
        raise DimensionError(f"Target has length {psi.size}, state dimension is {rho.data.shape[0]}")
    _check_normalized(psi)
    return _real(complex(psi.conj() @ rho.data @ psi), "Fidelity")
