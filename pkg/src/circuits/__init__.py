"""Gate/circuit model, ansatz compilation and randomized compiling."""

from .circuit import Circuit, Gate, GateKind, ParameterRef, gate_counts
from .ansatz_compiler import (AnsatzFamily, AnsatzSpec, build_adapt, build_ansatz, build_reference,
                              build_singlet_uccsd, build_uccd, compile_generator, exp_pauli_circuit)
from .randomized_compiling import randomized_compile

__all__ = [
    "Circuit", "Gate", "GateKind", "ParameterRef", "gate_counts",
    "AnsatzFamily", "AnsatzSpec", "build_adapt", "build_ansatz", "build_reference",
    "build_singlet_uccsd", "build_uccd", "compile_generator", "exp_pauli_circuit",
    "randomized_compile",
]
