#!/usr/bin/env python3
"""
NoisyLab - Randomized Compiling

Pauli-twirls every hard (CNOT) cycle of a circuit while keeping it logically
equivalent up to global phase:

    ... E  T  [CNOT cycle]  C  E' ...      with  C = CNOT . T . CNOT

A hard cycle is a maximal run of consecutive CNOTs acting on disjoint qubits.
Twirls T are drawn uniformly from {I, X, Y, Z} for each qubit the cycle
touches, in ascending qubit order, from ``numpy.random.default_rng(seed)``.

Twirls are absorbed as left Paulis into the last easy gate on their qubit;
corrections are absorbed as right Paulis into the next easy gate. Where no
easy gate is available the Pauli is emitted as a standalone gate, so the
only growth is in the single-qubit gate count.
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

try:
    from .circuit import Circuit, Gate, GateKind, gate_counts
    from ..operators.pauli import multiply_letters
    from ..utils.errors import CompilationError
    from ..utils.logger import get_logger
except ImportError:
    from circuits.circuit import Circuit, Gate, GateKind, gate_counts
    from operators.pauli import multiply_letters
    from utils.errors import CompilationError
    from utils.logger import get_logger


TWIRL_LETTERS = "IXYZ"
EASY_KINDS = {GateKind.H, GateKind.X, GateKind.Y, GateKind.Z,
              GateKind.RX, GateKind.RY, GateKind.RZ, GateKind.U1Q}

# letter <-> (x, z) symplectic bits
_TO_BITS = {'I': (0, 0), 'X': (1, 0), 'Z': (0, 1), 'Y': (1, 1)}
_FROM_BITS = {bits: letter for letter, bits in _TO_BITS.items()}


@dataclass(frozen=True)
class RandomizationReport:
    """Gate-count comparison between a circuit and one randomized compilation."""

    seed: int
    bare_1q: int
    bare_cnot: int
    compiled_1q: int
    compiled_cnot: int

    @property
    def inflation(self) -> float:
        """Relative growth of the single-qubit gate count."""
        if self.bare_1q == 0:
            return 0.0
        return (self.compiled_1q - self.bare_1q) / self.bare_1q


def propagate_through_cycle(cycle: List[Gate], twirl: Dict[int, str]) -> Dict[int, str]:
    """
    Conjugate a Pauli frame through a cycle of disjoint CNOTs.

    Returns the correction letter for every qubit in `twirl`.
    """
    bits = {q: list(_TO_BITS[letter]) for q, letter in twirl.items()}
    for gate in cycle:
        control, target = gate.qubits
        bits[target][0] ^= bits[control][0]
        bits[control][1] ^= bits[target][1]
    return {q: _FROM_BITS[tuple(b)] for q, b in bits.items()}


def _split_cycle(gates: Tuple[Gate, ...], start: int) -> List[Gate]:
    cycle: List[Gate] = []
    touched: set = set()
    index = start
    while index < len(gates) and gates[index].kind is GateKind.CNOT:
        if touched.intersection(gates[index].qubits):
            break
        cycle.append(gates[index])
        touched.update(gates[index].qubits)
        index += 1
    return cycle


def randomized_compile(c: Circuit, seed: int) -> Circuit:
    """
    Return a logically equivalent, Pauli-twirled copy of `c`.

    Args:
        c: circuit over the supported gate set (may still be symbolic)
        seed: RNG seed; equal seeds give identical output

    Returns:
        Circuit with the same CNOTs, the same parameter slots and possibly
        extra standalone Pauli gates

    Raises:
        CompilationError: unsupported gate kind
    """
    for gate in c.gates:
        if gate.kind not in EASY_KINDS and gate.kind is not GateKind.CNOT:
            raise CompilationError(f"Randomized compiling cannot handle {gate.kind.value}")

    rng = np.random.default_rng(seed)
    out: List[Gate] = []
    last_easy: Dict[int, Optional[int]] = {}
    pending: Dict[int, str] = {}

    index = 0
    gates = c.gates
    while index < len(gates):
        gate = gates[index]

        if gate.kind is not GateKind.CNOT:
            q = gate.qubits[0]
            correction = pending.pop(q, 'I')
            out.append(gate.dressed(right=correction))
            last_easy[q] = len(out) - 1
            index += 1
            continue

        cycle = _split_cycle(gates, index)
        qubits = sorted(q for g in cycle for q in g.qubits)
        twirl = {q: TWIRL_LETTERS[int(rng.integers(4))] for q in qubits}

        for q in qubits:
            slot = last_easy.get(q)
            if slot is not None:
                out[slot] = out[slot].dressed(left=twirl[q])
                continue
            # no easy gate since the previous cycle: fold its correction into this twirl
            _, letter = multiply_letters(twirl[q], pending.pop(q, 'I'))
            if letter != 'I':
                out.append(Gate.single(letter, q))

        out.extend(cycle)
        for q, letter in propagate_through_cycle(cycle, twirl).items():
            last_easy[q] = None
            if letter != 'I':
                pending[q] = letter
        index += len(cycle)

    for q in sorted(pending):
        out.append(Gate.single(pending[q], q))

    return Circuit(c.n_qubits, tuple(out), c.parameter_slots)


def randomization_report(c: Circuit, seed: int) -> Tuple[Circuit, RandomizationReport]:
    """Compile with `seed` and report the gate-count change."""
    compiled = randomized_compile(c, seed)
    bare_1q, bare_cnot = gate_counts(c)
    new_1q, new_cnot = gate_counts(compiled)
    report = RandomizationReport(seed, bare_1q, bare_cnot, new_1q, new_cnot)
    get_logger().debug(
        f"Seed {seed}: single-qubit gates {bare_1q} -> {new_1q} ({report.inflation:+.0%}), CNOTs {new_cnot}",
        "RC",
    )
    return compiled, report
