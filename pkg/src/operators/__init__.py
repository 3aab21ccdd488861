"""
NoisyLab - Operator Algebra

Pauli strings and sums, fermionic ladder operators and the Jordan-Wigner map.
"""

from .pauli import PauliString, PauliSum, multiply, commutator, to_matrix
from .fermion import FermionOp, jordan_wigner

__all__ = ['PauliString', 'PauliSum', 'multiply', 'commutator', 'to_matrix', 'FermionOp', 'jordan_wigner']
