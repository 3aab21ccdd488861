#!/usr/bin/env python3
"""
NoisyLab - Error Types

Exception hierarchy shared by the operator algebra, compiler, simulator,
optimizers and file readers. Errors describing bad input values also derive
from ValueError so callers can catch either.
"""

from typing import Optional


class LabError(Exception):
    """Base class for all NoisyLab errors."""


class DimensionError(LabError, ValueError):
    """Qubit counts or mode indices do not line up."""


class CapacityError(LabError, ValueError):
    """Register too large for dense representation."""


class DegenerateGeneratorError(LabError, ValueError):
    """Generator has no non-identity support."""


class UnsupportedModelError(LabError, ValueError):
    """Ansatz requested for a register shape it does not support."""


class CompilationError(LabError, ValueError):
    """Circuit contains something the compiler cannot handle."""


class BindingError(LabError, ValueError):
    """Parameter slot missing or unknown during binding."""


class NumericalIntegrityError(LabError, ArithmeticError):
    """A numerical invariant (Hermiticity, trace, reality) was violated."""


class NormalizationError(LabError, ValueError):
    """State vector is not normalized."""


class NoiseModelError(LabError, ValueError):
    """Depolarizing probability outside its admissible range."""


class OptimizationError(LabError, RuntimeError):
    """Optimization aborted, e.g. on a non-finite objective value."""


class ModelError(LabError, ValueError):
    """Orbital model cannot produce an operator pool."""


class HamiltonianParseError(LabError, ValueError):
    """Malformed Hamiltonian text."""

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class ManifestError(LabError, ValueError):
    """Sweep manifest is malformed or references unreadable files."""
