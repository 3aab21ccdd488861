#!/usr/bin/env python3
"""
NoisyLab - Ansatz Compiler

Compiles unitary-coupled-cluster style ansatz operators into gate circuits.

Every Pauli exponential exp(-i (scale*theta/2) P) becomes the usual
basis-change / CNOT-ladder / RZ / un-compute pattern. Anti-Hermitian
generators A = sum_k i*g_k*P_k (coefficients purely imaginary) are compiled
term by term in canonical order, exp(theta*A) = prod_k exp(-i (-2 g_k theta)/2 P_k),
which is exact whenever the terms commute (all excitation generators here do).

Families:
- UCCD: reference, then exp(-i (theta/2) Y0X1X2X3)
- SINGLET_UCCSD: reference, then exp(theta_1 * A_doubles), then exp(theta_0 * A_singles)
  so that the operator reads e^{theta_0 A_s} e^{theta_1 A_d}
- ADAPT: reference, then one exp(theta_k * A_k) per selected generator,
  later generators applied later in time
"""

from dataclasses import dataclass
from enum import Enum
from math import pi
from typing import FrozenSet, Iterable, List, Tuple

try:
    from .circuit import Circuit, Gate, GateKind, ParameterRef, gate_counts
    from ..operators.pauli import PauliString, PauliSum, COEFFICIENT_CUTOFF
    from ..operators.fermion import singlet_single_generator, singlet_double_generator
    from ..utils.errors import CompilationError, DegenerateGeneratorError, DimensionError, UnsupportedModelError
    from ..utils.logger import get_logger
except ImportError:
    from circuits.circuit import Circuit, Gate, GateKind, ParameterRef, gate_counts
    from operators.pauli import PauliString, PauliSum, COEFFICIENT_CUTOFF
    from operators.fermion import singlet_single_generator, singlet_double_generator
    from utils.errors import CompilationError, DegenerateGeneratorError, DimensionError, UnsupportedModelError
    from utils.logger import get_logger


class AnsatzFamily(str, Enum):
    UCCD = "uccd"
    SINGLET_UCCSD = "uccsd-singlet"
    ADAPT = "adapt"


# Four-qubit, two-electron model
MODEL_QUBITS = 4
REFERENCE_OCCUPATION: FrozenSet[int] = frozenset({0, 2})
UCCD_STRING = PauliString("YXXX")
UCCD_SLOT = "theta"
SINGLES_SLOT = "theta_0"
DOUBLES_SLOT = "theta_1"


def singlet_singles() -> PauliSum:
    """Spin-symmetrized single excitation of the four-qubit model (anti-Hermitian)."""
    return singlet_single_generator(0, 1, n_spatial=2)


def singlet_doubles() -> PauliSum:
    """Closed-shell pair excitation 0alpha 0beta -> 1alpha 1beta (anti-Hermitian)."""
    return singlet_double_generator(0, 0, 1, 1, n_spatial=2)


@dataclass(frozen=True)
class AnsatzSpec:
    """What to compile: family, register, reference determinant and ADAPT generators."""

    family: AnsatzFamily
    n_qubits: int = MODEL_QUBITS
    reference_occupation: FrozenSet[int] = REFERENCE_OCCUPATION
    generators: Tuple[Tuple[PauliSum, str], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'family', AnsatzFamily(self.family))
        object.__setattr__(self, 'reference_occupation', frozenset(self.reference_occupation))
        object.__setattr__(self, 'generators', tuple(self.generators))
        for q in self.reference_occupation:
            if not 0 <= q < self.n_qubits:
                raise DimensionError(f"Occupied qubit {q} outside register of {self.n_qubits}")
        if self.family is not AnsatzFamily.ADAPT and self.generators:
            raise CompilationError(f"{self.family.value} ansatz does not take explicit generators")

    @classmethod
    def uccd(cls) -> "AnsatzSpec":
        return cls(AnsatzFamily.UCCD)

    @classmethod
    def singlet_uccsd(cls) -> "AnsatzSpec":
        return cls(AnsatzFamily.SINGLET_UCCSD)

    @classmethod
    def adapt(cls, generators: Iterable[Tuple[PauliSum, str]], n_qubits: int = MODEL_QUBITS,
              reference_occupation: Iterable[int] = REFERENCE_OCCUPATION) -> "AnsatzSpec":
        return cls(AnsatzFamily.ADAPT, n_qubits, frozenset(reference_occupation), tuple(generators))

    @property
    def slots(self) -> Tuple[str, ...]:
        if self.family is AnsatzFamily.UCCD:
            return (UCCD_SLOT,)
        if self.family is AnsatzFamily.SINGLET_UCCSD:
            return (SINGLES_SLOT, DOUBLES_SLOT)
        return tuple(slot for _, slot in self.generators)

    @property
    def reference_index(self) -> int:
        """Basis index of the reference determinant (little-endian)."""
        return sum(1 << q for q in self.reference_occupation)


def exp_pauli_circuit(p: PauliString, slot: str, scale: float = 1.0) -> Circuit:
    """
    Circuit for exp(-i * (scale * theta / 2) * P) with theta bound to `slot`.

    Args:
        p: Pauli string with phase +1 or -1 (a -1 phase flips the rotation)
        slot: parameter slot name
        scale: multiplier on the slot value

    Returns:
        Circuit declaring the single slot

    Raises:
        DegenerateGeneratorError: all-identity string
        CompilationError: imaginary phase
    """
    support = p.support
    if not support:
        raise DegenerateGeneratorError(f"Cannot exponentiate the identity string {p}")
    if p.phase not in (1, -1):
        raise CompilationError(f"Pauli string {p} has an imaginary phase")
    scale = scale * p.phase.real

    basis_in: List[Gate] = []
    basis_out: List[Gate] = []
    for q in support:
        letter = p.letters[q]
        if letter == 'X':
            basis_in.append(Gate.single(GateKind.H, q))
            basis_out.append(Gate.single(GateKind.H, q))
        elif letter == 'Y':
            basis_in.append(Gate.single(GateKind.RX, q, pi / 2))
            basis_out.append(Gate.single(GateKind.RX, q, -pi / 2))

    ladder = [Gate.cnot(a, b) for a, b in zip(support, support[1:])]
    rotation = Gate.single(GateKind.RZ, support[-1], ParameterRef(slot, scale))
    gates = basis_in + ladder + [rotation] + ladder[::-1] + basis_out
    return Circuit(p.n_qubits, tuple(gates), (slot,))


def compile_generator(generator: PauliSum, slot: str) -> Circuit:
    """
    Compile exp(theta * A) for an anti-Hermitian generator A = sum_k i*g_k*P_k.

    Terms are emitted in the canonical (lexicographic) order of the sum.
    """
    if generator.is_zero():
        raise DegenerateGeneratorError("Cannot compile an empty generator")
    if not generator.has_imaginary_coefficients:
        raise CompilationError("Generator must be anti-Hermitian (purely imaginary coefficients)")

    circuit = Circuit(generator.n_qubits, (), (slot,))
    for coefficient, letters in generator:
        if abs(coefficient) < COEFFICIENT_CUTOFF:
            continue
        circuit = circuit + exp_pauli_circuit(PauliString(letters), slot, -2.0 * coefficient.imag)
    return circuit


def build_reference(occupation: Iterable[int], n_qubits: int) -> Circuit:
    """X on every occupied qubit, turning |0...0> into the occupation basis state."""
    gates = tuple(Gate.single(GateKind.X, q) for q in sorted(set(occupation)))
    return Circuit(n_qubits, gates, ())


def _require_model(spec: AnsatzSpec):
    if spec.n_qubits != MODEL_QUBITS or len(spec.reference_occupation) != 2:
        raise UnsupportedModelError(
            f"{spec.family.value} is defined for {MODEL_QUBITS} qubits and 2 electrons, "
            f"got {spec.n_qubits} qubits and {len(spec.reference_occupation)} electrons"
        )


def build_uccd(spec: AnsatzSpec) -> Circuit:
    """Reference preparation followed by exp(-i (theta/2) Y0X1X2X3)."""
    if spec.family is not AnsatzFamily.UCCD:
        raise UnsupportedModelError(f"build_uccd called with a {spec.family.value} spec")
    _require_model(spec)
    return build_reference(spec.reference_occupation, spec.n_qubits) + exp_pauli_circuit(UCCD_STRING, UCCD_SLOT)


def build_singlet_uccsd(spec: AnsatzSpec) -> Circuit:
    if spec.family is not AnsatzFamily.SINGLET_UCCSD:
        raise UnsupportedModelError(f"build_singlet_uccsd called with a {spec.family.value} spec")
    _require_model(spec)

    body = (build_reference(spec.reference_occupation, spec.n_qubits)
            + compile_generator(singlet_doubles(), DOUBLES_SLOT)
            + compile_generator(singlet_singles(), SINGLES_SLOT))
    return Circuit(spec.n_qubits, body.gates, spec.slots)


def build_adapt(spec: AnsatzSpec) -> Circuit:
    if spec.family is not AnsatzFamily.ADAPT:
        raise UnsupportedModelError(f"build_adapt called with a {spec.family.value} spec")

    circuit = build_reference(spec.reference_occupation, spec.n_qubits)
    for generator, slot in spec.generators:
        if generator.n_qubits != spec.n_qubits:
            raise DimensionError(f"Generator on {generator.n_qubits} qubits, register has {spec.n_qubits}")
        circuit = circuit + compile_generator(generator, slot)
    return Circuit(spec.n_qubits, circuit.gates, spec.slots)


_BUILDERS = {
    AnsatzFamily.UCCD: build_uccd,
    AnsatzFamily.SINGLET_UCCSD: build_singlet_uccsd,
    AnsatzFamily.ADAPT: build_adapt,
}


def build_ansatz(spec: AnsatzSpec) -> Circuit:
    """Compile any supported family."""
    circuit = _BUILDERS[spec.family](spec)
    n_1q, n_cnot = gate_counts(circuit)
    get_logger().debug(
        f"Compiled {spec.family.value}: {n_1q} single-qubit gates, {n_cnot} CNOTs, depth {circuit.depth()}",
        "COMPILE",
    )
    return circuit
