#!/usr/bin/env python3
"""
NoisyLab - Pauli Algebra

Phased Pauli strings, weighted Pauli sums and their dense matrices.

Conventions:
- letters[k] is the Pauli acting on qubit k ("qubit 0 first").
- Registers are little-endian: basis index b = sum_k q_k * 2**k, so the dense
  matrix of a string is kron(M_{n-1}, ..., M_1, M_0).
- PauliSum keeps one term per letter pattern, sorted lexicographically, with
  merged coefficients below 1e-12 dropped.
"""

from dataclasses import dataclass
from functools import reduce, lru_cache
from typing import Dict, Iterable, Iterator, List, Tuple, Union

import numpy as np

try:
    from ..utils.errors import DimensionError, CapacityError
except ImportError:
    from utils.errors import DimensionError, CapacityError


PAULI_LETTERS = "IXYZ"

PAULI_MATRICES: Dict[str, np.ndarray] = {
    'I': np.array([[1, 0], [0, 1]], dtype=complex),
    'X': np.array([[0, 1], [1, 0]], dtype=complex),
    'Y': np.array([[0, -1j], [1j, 0]], dtype=complex),
    'Z': np.array([[1, 0], [0, -1]], dtype=complex),
}
for _m in PAULI_MATRICES.values():
    _m.setflags(write=False)

# (a, b) -> (phase, c) with a.b = phase * c
_PRODUCT_TABLE: Dict[Tuple[str, str], Tuple[complex, str]] = {
    ('X', 'Y'): (1j, 'Z'), ('Y', 'X'): (-1j, 'Z'),
    ('Y', 'Z'): (1j, 'X'), ('Z', 'Y'): (-1j, 'X'),
    ('Z', 'X'): (1j, 'Y'), ('X', 'Z'): (-1j, 'Y'),
}

COEFFICIENT_CUTOFF = 1e-12
DENSE_QUBIT_LIMIT = 10

_PHASES = (1, -1, 1j, -1j)


def multiply_letters(a: str, b: str) -> Tuple[complex, str]:
    """Single-qubit Pauli product a.b as (phase, letter)."""
    if a == 'I':
        return 1, b
    if b == 'I':
        return 1, a
    if a == b:
        return 1, 'I'
    return _PRODUCT_TABLE[(a, b)]


def _normalize_phase(phase: complex) -> complex:
    for candidate in _PHASES:
        if abs(phase - candidate) < 1e-12:
            return candidate
    raise ValueError(f"Pauli phase must be one of +1, -1, +i, -i, got {phase}")


@dataclass(frozen=True)
class PauliString:
    """Tensor product of single-qubit Paulis with a global phase in {+1, -1, +i, -i}."""

    letters: str
    phase: complex = 1

    def __post_init__(self):
        if not self.letters:
            raise DimensionError("PauliString needs at least one qubit")
        bad = [c for c in self.letters if c not in PAULI_LETTERS]
        if bad:
            raise ValueError(f"Invalid Pauli letter {bad[0]!r} in {self.letters!r}")
        object.__setattr__(self, 'phase', _normalize_phase(complex(self.phase)))

    @classmethod
    def identity(cls, n_qubits: int) -> "PauliString":
        return cls('I' * n_qubits)

    @classmethod
    def from_sparse(cls, n_qubits: int, ops: Dict[int, str], phase: complex = 1) -> "PauliString":
        """Build from {qubit: letter}, e.g. from_sparse(4, {0: 'Y', 1: 'X'})."""
        letters = ['I'] * n_qubits
        for qubit, letter in ops.items():
            if not 0 <= qubit < n_qubits:
                raise DimensionError(f"Qubit {qubit} outside register of {n_qubits}")
            letters[qubit] = letter
        return cls(''.join(letters), phase)

    @property
    def n_qubits(self) -> int:
        return len(self.letters)

    @property
    def support(self) -> List[int]:
        """Qubits carrying a non-identity letter, ascending."""
        return [k for k, c in enumerate(self.letters) if c != 'I']

    def is_identity(self) -> bool:
        return not self.support

    def __mul__(self, other: "PauliString") -> "PauliString":
        return multiply(self, other)

    def commutes_with(self, other: "PauliString") -> bool:
        clashes = sum(1 for a, b in zip(self.letters, other.letters)
                      if a != 'I' and b != 'I' and a != b)
        return clashes % 2 == 0

    def to_matrix(self) -> np.ndarray:
        return self.phase * _letters_matrix(self.letters)

    def __str__(self) -> str:
        prefix = {1: '', -1: '-', 1j: 'i', -1j: '-i'}[self.phase]
        return prefix + self.letters


def multiply(a: PauliString, b: PauliString) -> PauliString:
    """
    Product a.b with the global phase tracked exactly.

    Raises:
        DimensionError: if the strings act on different qubit counts
    """
    if a.n_qubits != b.n_qubits:
        raise DimensionError(f"Cannot multiply {a.n_qubits}-qubit and {b.n_qubits}-qubit strings")
    phase = a.phase * b.phase
    letters = []
    for x, y in zip(a.letters, b.letters):
        p, c = multiply_letters(x, y)
        phase *= p
        letters.append(c)
    return PauliString(''.join(letters), phase)


@lru_cache(maxsize=4096)
def _letters_matrix(letters: str) -> np.ndarray:
    if len(letters) > DENSE_QUBIT_LIMIT:
        raise CapacityError(f"{len(letters)} qubits exceeds the dense limit of {DENSE_QUBIT_LIMIT}")
    # qubit 0 is least significant -> rightmost kron factor
    matrix = reduce(np.kron, [PAULI_MATRICES[c] for c in reversed(letters)])
    matrix.setflags(write=False)
    return matrix


Number = Union[int, float, complex]


@dataclass(frozen=True)
class PauliSum:
    """
    Weighted sum of phase-free Pauli strings in canonical merged form.

    Hamiltonians carry real coefficients (Ha). Anti-Hermitian generators and
    commutators carry imaginary ones, so coefficients are stored as complex.
    """

    n_qubits: int
    terms: Tuple[Tuple[complex, str], ...] = ()

    def __post_init__(self):
        if self.n_qubits < 1:
            raise DimensionError("PauliSum needs a positive qubit count")
        for _, letters in self.terms:
            if len(letters) != self.n_qubits:
                raise DimensionError(f"Term {letters!r} does not act on {self.n_qubits} qubits")

    @classmethod
    def from_terms(cls, n_qubits: int, terms: Iterable[Tuple[Number, Union[str, PauliString]]]) -> "PauliSum":
        """Merge arbitrary (coefficient, string) pairs into canonical form."""
        merged: Dict[str, complex] = {}
        for coefficient, string in terms:
            if isinstance(string, PauliString):
                coefficient = coefficient * string.phase
                letters = string.letters
            else:
                letters = PauliString(string).letters
            if len(letters) != n_qubits:
                raise DimensionError(f"Term {letters!r} does not act on {n_qubits} qubits")
            merged[letters] = merged.get(letters, 0j) + complex(coefficient)
        canonical = tuple(
            (_clean(merged[k]), k) for k in sorted(merged) if abs(merged[k]) >= COEFFICIENT_CUTOFF
        )
        return cls(n_qubits, canonical)

    @classmethod
    def zero(cls, n_qubits: int) -> "PauliSum":
        return cls(n_qubits, ())

    @classmethod
    def from_string(cls, string: PauliString, coefficient: Number = 1.0) -> "PauliSum":
        return cls.from_terms(string.n_qubits, [(coefficient, string)])

    def canonical(self) -> "PauliSum":
        return PauliSum.from_terms(self.n_qubits, self.terms)

    def __iter__(self) -> Iterator[Tuple[complex, str]]:
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def coefficient(self, letters: str) -> complex:
        for c, k in self.terms:
            if k == letters:
                return c
        return 0j

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def has_real_coefficients(self) -> bool:
        return all(abs(c.imag) < COEFFICIENT_CUTOFF for c, _ in self.terms)

    @property
    def has_imaginary_coefficients(self) -> bool:
        return all(abs(c.real) < COEFFICIENT_CUTOFF for c, _ in self.terms)

    def _check(self, other: "PauliSum"):
        if self.n_qubits != other.n_qubits:
            raise DimensionError(f"Qubit count mismatch: {self.n_qubits} vs {other.n_qubits}")

    def __add__(self, other: "PauliSum") -> "PauliSum":
        self._check(other)
        return PauliSum.from_terms(self.n_qubits, self.terms + other.terms)

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        return self + other.scale(-1)

    def scale(self, factor: Number) -> "PauliSum":
        return PauliSum.from_terms(self.n_qubits, [(factor * c, k) for c, k in self.terms])

    def __mul__(self, other: Union["PauliSum", Number]) -> "PauliSum":
        if not isinstance(other, PauliSum):
            return self.scale(other)
        self._check(other)
        products = []
        for ca, ka in self.terms:
            for cb, kb in other.terms:
                product = multiply(PauliString(ka), PauliString(kb))
                products.append((ca * cb, product))
        return PauliSum.from_terms(self.n_qubits, products)

    __rmul__ = scale

    def adjoint(self) -> "PauliSum":
        return PauliSum(self.n_qubits, tuple((c.conjugate(), k) for c, k in self.terms))

    def to_matrix(self) -> np.ndarray:
        """
        Dense 2^n x 2^n matrix in little-endian ordering.

        Raises:
            CapacityError: above DENSE_QUBIT_LIMIT qubits
        """
        if self.n_qubits > DENSE_QUBIT_LIMIT:
            raise CapacityError(f"{self.n_qubits} qubits exceeds the dense limit of {DENSE_QUBIT_LIMIT}")
        dim = 2 ** self.n_qubits
        matrix = np.zeros((dim, dim), dtype=complex)
        for coefficient, letters in self.terms:
            matrix += coefficient * _letters_matrix(letters)
        return matrix

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for c, k in self.terms:
            value = f"{c.real:+.8g}" if abs(c.imag) < COEFFICIENT_CUTOFF else f"{c:+.8g}"
            parts.append(f"{value} {k}")
        return " ".join(parts)


def _clean(value: complex) -> complex:
    """Zero out sub-cutoff real or imaginary residue."""
    real = value.real if abs(value.real) >= COEFFICIENT_CUTOFF else 0.0
    imag = value.imag if abs(value.imag) >= COEFFICIENT_CUTOFF else 0.0
    return complex(real, imag)


def commutator(a: PauliSum, b: PauliSum) -> PauliSum:
    """
    [a, b] = ab - ba in canonical form.

    Only anti-commuting string pairs contribute (2 * product), so commuting
    operators give an exactly empty sum.
    """
    a._check(b)
    products = []
    for ca, ka in a.terms:
        sa = PauliString(ka)
        for cb, kb in b.terms:
            sb = PauliString(kb)
            if not sa.commutes_with(sb):
                products.append((2 * ca * cb, multiply(sa, sb)))
    return PauliSum.from_terms(a.n_qubits, products)


def to_matrix(s: Union[PauliSum, PauliString]) -> np.ndarray:
    return s.to_matrix()
