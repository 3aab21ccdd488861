"""
NoisyLab - Noisy VQE / ADAPT-VQE Simulation Lab

Compiles unitary-coupled-cluster ansatz operators to gate circuits, simulates
them as density matrices under per-gate depolarizing noise, optimizes the
circuit parameters and compares the results with exact diagonalization.

Key Components:
- operators: Pauli algebra, fermionic operators and the Jordan-Wigner map
- circuits: gate/circuit model, ansatz compiler and randomized compiling
- simulation: density-matrix simulator and exact reference calculations
- optimizers, vqe_driver: VQE and ADAPT-VQE
- ham_io, cli: Hamiltonian files, sweep manifests and the command line
- utils, config: logging, errors and settings

License: MIT
"""

__version__ = "1.0.0"
__license__ = "MIT"

# Core modules
from . import utils
from . import config
from . import operators
from . import circuits
from . import simulation

__all__ = [
    "utils",
    "config",
    "operators",
    "circuits",
    "simulation",
]
