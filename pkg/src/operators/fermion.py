#!/usr/bin/env python3
"""
NoisyLab - Fermionic Operators and the Jordan-Wigner Mapping

FermionOp holds sums of products of creation/annihilation operators. The
Jordan-Wigner transform maps them onto PauliSum with the occupation
convention "occupied spin orbital <-> qubit in |1>":

    a_p^dagger -> Z_0 ... Z_{p-1} (X_p - iY_p) / 2
    a_p        -> Z_0 ... Z_{p-1} (X_p + iY_p) / 2

so that a_p^dagger a_p -> (I - Z_p) / 2.

Spin-orbital layout used by the excitation builders is spin-blocked:
spatial orbital k has its alpha spin orbital on qubit k and its beta spin
orbital on qubit n_spatial + k. For the four-qubit NaH model this puts the
occupied orbital on qubits {0, 2} and the virtual one on {1, 3}.
"""

from dataclasses import dataclass
from math import sqrt
from typing import Iterable, List, Tuple

try:
    from .pauli import PauliString, PauliSum
    from ..utils.errors import DimensionError
except ImportError:
    from operators.pauli import PauliString, PauliSum
    from utils.errors import DimensionError


Factor = Tuple[int, bool]  # (mode index, dagger)


@dataclass(frozen=True)
class FermionOp:
    """Sum of coefficient * ordered product of ladder operators."""

    terms: Tuple[Tuple[complex, Tuple[Factor, ...]], ...] = ()

    @classmethod
    def term(cls, coefficient: complex, *factors: Factor) -> "FermionOp":
        for mode, _ in factors:
            if mode < 0:
                raise DimensionError(f"Negative mode index {mode}")
        return cls(((complex(coefficient), tuple(factors)),))

    @classmethod
    def creation(cls, mode: int) -> "FermionOp":
        return cls.term(1.0, (mode, True))

    @classmethod
    def annihilation(cls, mode: int) -> "FermionOp":
        return cls.term(1.0, (mode, False))

    @property
    def max_mode(self) -> int:
        modes = [m for _, factors in self.terms for m, _ in factors]
        return max(modes) if modes else -1

    def __add__(self, other: "FermionOp") -> "FermionOp":
        return FermionOp(self.terms + other.terms)

    def __sub__(self, other: "FermionOp") -> "FermionOp":
        return self + other.scale(-1)

    def scale(self, factor: complex) -> "FermionOp":
        return FermionOp(tuple((c * factor, f) for c, f in self.terms))

    def __mul__(self, other: "FermionOp") -> "FermionOp":
        return FermionOp(tuple(
            (ca * cb, fa + fb) for ca, fa in self.terms for cb, fb in other.terms
        ))

    def adjoint(self) -> "FermionOp":
        """Hermitian conjugate: reverse each product and flip every dagger."""
        return FermionOp(tuple(
            (c.conjugate(), tuple((m, not d) for m, d in reversed(f))) for c, f in self.terms
        ))


def _ladder(mode: int, dagger: bool, n_qubits: int) -> PauliSum:
    z_string = {k: 'Z' for k in range(mode)}
    x = PauliString.from_sparse(n_qubits, {**z_string, mode: 'X'})
    y = PauliString.from_sparse(n_qubits, {**z_string, mode: 'Y'})
    sign = -1 if dagger else 1
    return PauliSum.from_terms(n_qubits, [(0.5, x), (sign * 0.5j, y)])


def jordan_wigner(f: FermionOp, n_qubits: int) -> PauliSum:
    """
    Map a fermionic operator onto qubits.

    Args:
        f: fermionic operator
        n_qubits: register size, at least max mode index + 1

    Returns:
        canonical PauliSum

    Raises:
        DimensionError: if a mode index does not fit the register
    """
    if f.max_mode >= n_qubits:
        raise DimensionError(f"Mode {f.max_mode} does not fit a {n_qubits}-qubit register")

    result = PauliSum.zero(n_qubits)
    for coefficient, factors in f.terms:
        product = PauliSum.from_terms(n_qubits, [(coefficient, 'I' * n_qubits)])
        for mode, dagger in factors:
            product = product * _ladder(mode, dagger, n_qubits)
        result = result + product
    return result


def excitation_operator(occupied: Iterable[int], virtual: Iterable[int]) -> FermionOp:
    """
    T = a_a^dagger a_b^dagger ... a_i a_j ... for occupied (i, j, ...) and virtual (a, b, ...).

    Creation operators are written in the order of `virtual`, annihilation
    operators in the order of `occupied`.
    """
    factors = [(a, True) for a in virtual] + [(i, False) for i in occupied]
    return FermionOp.term(1.0, *factors)


def anti_hermitian_excitation(occupied: Iterable[int], virtual: Iterable[int], n_qubits: int) -> PauliSum:
    """JW image of T - T^dagger for one excitation."""
    t = excitation_operator(list(occupied), list(virtual))
    return jordan_wigner(t - t.adjoint(), n_qubits)


def spin_orbital(spatial: int, beta: bool, n_spatial: int) -> int:
    """Qubit index of a spin orbital in the spin-blocked layout."""
    return spatial + (n_spatial if beta else 0)


def singlet_single_generator(i: int, a: int, n_spatial: int) -> PauliSum:
    """Spin-summed single excitation (T_alpha + T_beta) / sqrt(2), minus its adjoint."""
    n_qubits = 2 * n_spatial
    total = PauliSum.zero(n_qubits)
    for beta in (False, True):
        total = total + anti_hermitian_excitation(
            [spin_orbital(i, beta, n_spatial)], [spin_orbital(a, beta, n_spatial)], n_qubits
        )
    return total.scale(1 / sqrt(2))


def singlet_double_generator(i: int, j: int, a: int, b: int, n_spatial: int) -> PauliSum:
    """
    Spin-complemented double excitation ij -> ab, minus its adjoint.

    For i == j and a == b this is the single closed-shell pair excitation
    a_{a,alpha}^dagger a_{b,beta}^dagger a_{i,alpha} a_{j,beta} - h.c.; otherwise the
    opposite-spin and same-spin channels are summed with weight 1/sqrt(count).
    """
    n_qubits = 2 * n_spatial
    so = lambda k, beta: spin_orbital(k, beta, n_spatial)

    channels: List[Tuple[List[int], List[int]]] = [
        ([so(i, False), so(j, True)], [so(a, False), so(b, True)]),
    ]
    if (i, a) != (j, b):
        channels.append(([so(j, False), so(i, True)], [so(b, False), so(a, True)]))
    if i != j and a != b:
        channels.append(([so(i, False), so(j, False)], [so(a, False), so(b, False)]))
        channels.append(([so(i, True), so(j, True)], [so(a, True), so(b, True)]))

    total = PauliSum.zero(n_qubits)
    for occ, virt in channels:
        total = total + anti_hermitian_excitation(occ, virt, n_qubits)
    return total.scale(1 / sqrt(len(channels)))
