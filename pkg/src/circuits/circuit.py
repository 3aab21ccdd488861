#!/usr/bin/env python3
"""
NoisyLab - Gate and Circuit Model

Gates are immutable values. Rotation angles are either numbers or affine
references to named parameter slots (scale * theta + offset); binding a
circuit replaces every reference with a number.

U1Q gates come in two flavours: a fixed numeric 2x2 matrix, or a "dressed"
gate L . inner . R where inner is another single-qubit gate (possibly still
symbolic) and L, R are Pauli letters. Randomized compiling produces the
dressed form so that compiled circuits can still be optimized.

Text serialization, one gate per line:

    KIND q[,q2][,angle]

with angle printed as a number, as ``slot``, or as ``slot*scale+offset``;
dressed U1Q gates print as ``U1Q q,L*INNER(angle)*R``.
"""

from dataclasses import dataclass, replace
from enum import Enum
from functools import lru_cache, reduce
from math import cos, sin
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

try:
    from ..operators.pauli import PAULI_MATRICES, DENSE_QUBIT_LIMIT, multiply_letters
    from ..utils.errors import BindingError, CapacityError, CompilationError, DimensionError
except ImportError:
    from operators.pauli import PAULI_MATRICES, DENSE_QUBIT_LIMIT, multiply_letters
    from utils.errors import BindingError, CapacityError, CompilationError, DimensionError


class GateKind(str, Enum):
    H = "H"
    X = "X"
    Y = "Y"
    Z = "Z"
    RX = "RX"
    RY = "RY"
    RZ = "RZ"
    U1Q = "U1Q"
    CNOT = "CNOT"


ROTATIONS = {GateKind.RX, GateKind.RY, GateKind.RZ}
DIAGONAL = {GateKind.Z, GateKind.RZ}

_HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)

Matrix2 = Tuple[Tuple[complex, complex], Tuple[complex, complex]]


@dataclass(frozen=True)
class ParameterRef:
    """Affine reference scale * slot + offset to a named circuit parameter."""

    slot: str
    scale: float = 1.0
    offset: float = 0.0

    def resolve(self, values: Mapping[str, float]) -> float:
        if self.slot not in values:
            raise BindingError(f"No value bound for parameter slot {self.slot!r}")
        return self.scale * float(values[self.slot]) + self.offset

    def __str__(self) -> str:
        if self.scale == 1.0 and self.offset == 0.0:
            return self.slot
        return f"{self.slot}*{self.scale!r}+{self.offset!r}"


Angle = Union[float, ParameterRef]


@dataclass(frozen=True)
class Gate:
    """One gate; qubits is (q,) or (control, target) for CNOT."""

    kind: GateKind
    qubits: Tuple[int, ...]
    angle: Optional[Angle] = None
    matrix: Optional[Matrix2] = None
    inner: Optional["Gate"] = None
    left: str = 'I'
    right: str = 'I'

    def __post_init__(self):
        object.__setattr__(self, 'kind', GateKind(self.kind))
        object.__setattr__(self, 'qubits', tuple(int(q) for q in self.qubits))
        arity = 2 if self.kind is GateKind.CNOT else 1
        if len(self.qubits) != arity:
            raise CompilationError(f"{self.kind.value} acts on {arity} qubit(s), got {self.qubits}")
        if len(set(self.qubits)) != len(self.qubits):
            raise CompilationError(f"CNOT control and target must differ, got {self.qubits}")
        if self.kind in ROTATIONS and self.angle is None:
            raise CompilationError(f"{self.kind.value} needs an angle")
        if self.kind is GateKind.U1Q:
            if (self.matrix is None) == (self.inner is None):
                raise CompilationError("U1Q needs exactly one of matrix or inner gate")
            if self.matrix is not None:
                m = np.array(self.matrix, dtype=complex)
                if not np.allclose(m.conj().T @ m, np.eye(2), atol=1e-12):
                    raise CompilationError("U1Q matrix is not unitary")
            elif self.inner.qubits != self.qubits or self.inner.kind is GateKind.CNOT:
                raise CompilationError("Dressed U1Q must wrap a single-qubit gate on the same qubit")

    # construction helpers
    @classmethod
    def single(cls, kind: Union[str, GateKind], qubit: int, angle: Optional[Angle] = None) -> "Gate":
        return cls(GateKind(kind), (qubit,), angle)

    @classmethod
    def cnot(cls, control: int, target: int) -> "Gate":
        return cls(GateKind.CNOT, (control, target))

    @classmethod
    def u1q(cls, qubit: int, matrix: np.ndarray) -> "Gate":
        m = np.asarray(matrix, dtype=complex)
        return cls(GateKind.U1Q, (qubit,), matrix=((m[0, 0], m[0, 1]), (m[1, 0], m[1, 1])))

    @property
    def arity(self) -> int:
        return len(self.qubits)

    @property
    def is_diagonal(self) -> bool:
        return self.kind in DIAGONAL

    @property
    def slots(self) -> List[str]:
        if isinstance(self.angle, ParameterRef):
            return [self.angle.slot]
        if self.inner is not None:
            return self.inner.slots
        return []

    def dressed(self, left: str = 'I', right: str = 'I') -> "Gate":
        """Return U' = left . U . right as a dressed U1Q gate."""
        if self.kind is GateKind.CNOT:
            raise CompilationError("Only single-qubit gates can absorb Paulis")
        if left == 'I' and right == 'I':
            return self
        if self.kind is GateKind.U1Q and self.inner is not None:
            _, new_left = multiply_letters(left, self.left)
            _, new_right = multiply_letters(self.right, right)
            return replace(self, left=new_left, right=new_right)
        return Gate(GateKind.U1Q, self.qubits, inner=self, left=left, right=right)

    def bind(self, values: Mapping[str, float]) -> "Gate":
        if isinstance(self.angle, ParameterRef):
            return replace(self, angle=self.angle.resolve(values))
        if self.inner is not None:
            return replace(self, inner=self.inner.bind(values))
        return self

    def unitary(self, values: Optional[Mapping[str, float]] = None) -> np.ndarray:
        """Local unitary: 2x2, or 4x4 for CNOT in (control, target) order with control as high bit."""
        kind = self.kind
        if kind is GateKind.CNOT:
            return _CNOT_LOCAL
        if kind is GateKind.U1Q:
            if self.matrix is not None:
                return np.array(self.matrix, dtype=complex)
            return PAULI_MATRICES[self.left] @ self.inner.unitary(values) @ PAULI_MATRICES[self.right]
        if kind is GateKind.H:
            return _HADAMARD
        if kind in (GateKind.X, GateKind.Y, GateKind.Z):
            return PAULI_MATRICES[kind.value]
        theta = self._numeric_angle(values)
        c, s = cos(theta / 2), sin(theta / 2)
        if kind is GateKind.RX:
            return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
        if kind is GateKind.RY:
            return np.array([[c, -s], [s, c]], dtype=complex)
        return np.array([[c - 1j * s, 0], [0, c + 1j * s]], dtype=complex)

    def _numeric_angle(self, values: Optional[Mapping[str, float]]) -> float:
        if isinstance(self.angle, ParameterRef):
            if values is None:
                raise BindingError(f"Gate {self.kind.value} on {self.qubits} has unbound slot {self.angle.slot!r}")
            return self.angle.resolve(values)
        return float(self.angle)

    def operator(self, n_qubits: int, values: Optional[Mapping[str, float]] = None) -> np.ndarray:
        """Gate embedded in the full little-endian register."""
        if self.kind is GateKind.CNOT:
            return cnot_operator(self.qubits[0], self.qubits[1], n_qubits)
        return embed_single_qubit(self.unitary(values), self.qubits[0], n_qubits)

    def to_text(self) -> str:
        qubits = ",".join(str(q) for q in self.qubits)
        if self.kind is GateKind.U1Q:
            if self.inner is not None:
                return f"U1Q {qubits},{self.left}*{_inner_text(self.inner)}*{self.right}"
            flat = ",".join(f"{complex(v)!r}" for row in self.matrix for v in row)
            return f"U1Q {qubits},[{flat}]"
        if self.angle is not None:
            return f"{self.kind.value} {qubits},{_angle_text(self.angle)}"
        return f"{self.kind.value} {qubits}"


def _angle_text(angle: Angle) -> str:
    return str(angle) if isinstance(angle, ParameterRef) else repr(float(angle))


def _inner_text(gate: Gate) -> str:
    if gate.angle is not None:
        return f"{gate.kind.value}({_angle_text(gate.angle)})"
    if gate.kind is GateKind.U1Q:
        return "U1Q[" + gate.to_text().split(",", 1)[1] + "]"
    return gate.kind.value


_CNOT_LOCAL = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
_CNOT_LOCAL.setflags(write=False)


def _check_register(n_qubits: int, *qubits: int):
    if n_qubits > DENSE_QUBIT_LIMIT:
        raise CapacityError(f"{n_qubits} qubits exceeds the dense limit of {DENSE_QUBIT_LIMIT}")
    for q in qubits:
        if not 0 <= q < n_qubits:
            raise DimensionError(f"Qubit {q} outside register of {n_qubits}")


def embed_single_qubit(u: np.ndarray, qubit: int, n_qubits: int) -> np.ndarray:
    """kron(I_high, u, I_low) with `qubit` low-order qubits below u."""
    _check_register(n_qubits, qubit)
    return np.kron(np.kron(np.eye(2 ** (n_qubits - qubit - 1)), u), np.eye(2 ** qubit))


@lru_cache(maxsize=1024)
def cnot_operator(control: int, target: int, n_qubits: int) -> np.ndarray:
    """CNOT as |0><0|_c (x) I + |1><1|_c (x) X_t on the full register."""
    _check_register(n_qubits, control, target)
    p0 = embed_single_qubit(np.diag([1, 0]).astype(complex), control, n_qubits)
    p1 = embed_single_qubit(np.diag([0, 1]).astype(complex), control, n_qubits)
    x_t = embed_single_qubit(PAULI_MATRICES['X'], target, n_qubits)
    op = p0 + p1 @ x_t
    op.setflags(write=False)
    return op


@lru_cache(maxsize=4096)
def pauli_operator(letter: str, qubit: int, n_qubits: int) -> np.ndarray:
    """Single-qubit Pauli embedded in the register (cached, read-only)."""
    op = embed_single_qubit(PAULI_MATRICES[letter], qubit, n_qubits)
    op.setflags(write=False)
    return op


@dataclass(frozen=True)
class Circuit:
    """Ordered gate list over n_qubits with declared parameter slots."""

    n_qubits: int
    gates: Tuple[Gate, ...] = ()
    parameter_slots: Tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'gates', tuple(self.gates))
        object.__setattr__(self, 'parameter_slots', tuple(self.parameter_slots))
        if self.n_qubits < 1:
            raise DimensionError("Circuit needs at least one qubit")
        if len(set(self.parameter_slots)) != len(self.parameter_slots):
            raise BindingError(f"Duplicate parameter slots in {self.parameter_slots}")
        declared = set(self.parameter_slots)
        for gate in self.gates:
            for q in gate.qubits:
                if not 0 <= q < self.n_qubits:
                    raise DimensionError(f"Gate {gate.to_text()} outside register of {self.n_qubits}")
            for slot in gate.slots:
                if slot not in declared:
                    raise BindingError(f"Gate {gate.to_text()} references undeclared slot {slot!r}")

    def __len__(self) -> int:
        return len(self.gates)

    def __add__(self, other: "Circuit") -> "Circuit":
        if other.n_qubits != self.n_qubits:
            raise DimensionError(f"Cannot append a {other.n_qubits}-qubit circuit to a {self.n_qubits}-qubit one")
        slots = self.parameter_slots + tuple(s for s in other.parameter_slots if s not in self.parameter_slots)
        return Circuit(self.n_qubits, self.gates + other.gates, slots)

    @property
    def is_bound(self) -> bool:
        return all(not g.slots for g in self.gates)

    def values_from(self, bindings: Union[Mapping[str, float], Sequence[float], None]) -> Dict[str, float]:
        """Normalize bindings given as a mapping or as values in slot order."""
        if bindings is None:
            bindings = {}
        if isinstance(bindings, Mapping):
            values = {k: float(v) for k, v in bindings.items()}
        else:
            seq = [float(v) for v in bindings]
            if len(seq) != len(self.parameter_slots):
                raise BindingError(f"Expected {len(self.parameter_slots)} parameter values, got {len(seq)}")
            values = dict(zip(self.parameter_slots, seq))
        missing = [s for s in self.parameter_slots if s not in values]
        if missing:
            raise BindingError(f"Missing bindings for slots: {', '.join(missing)}")
        return values

    def bind(self, bindings: Union[Mapping[str, float], Sequence[float], None]) -> "Circuit":
        """Fully numeric copy of the circuit."""
        values = self.values_from(bindings)
        return Circuit(self.n_qubits, tuple(g.bind(values) for g in self.gates), ())

    def unitary(self, bindings: Union[Mapping[str, float], Sequence[float], None] = None) -> np.ndarray:
        """Dense unitary of the whole circuit (first gate applied first)."""
        values = self.values_from(bindings)
        dim = 2 ** self.n_qubits
        ops = [g.operator(self.n_qubits, values) for g in self.gates]
        return reduce(lambda acc, op: op @ acc, ops, np.eye(dim, dtype=complex))

    def gate_counts(self) -> Tuple[int, int]:
        return gate_counts(self)

    def depth(self) -> int:
        """Number of layers when each gate starts after the last gate on its qubits."""
        frontier = [0] * self.n_qubits
        for gate in self.gates:
            layer = max(frontier[q] for q in gate.qubits) + 1
            for q in gate.qubits:
                frontier[q] = layer
        return max(frontier, default=0)

    def to_text(self) -> str:
        header = [f"# qubits: {self.n_qubits}"]
        if self.parameter_slots:
            header.append(f"# parameters: {', '.join(self.parameter_slots)}")
        return "\n".join(header + [g.to_text() for g in self.gates]) + "\n"


def gate_counts(c: Circuit) -> Tuple[int, int]:
    """(single-qubit gate count, CNOT count)."""
    n_cnot = sum(1 for g in c.gates if g.arity == 2)
    return len(c.gates) - n_cnot, n_cnot
