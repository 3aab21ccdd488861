"""Density-matrix simulation and exact reference calculations."""

from .density_sim import DensityMatrix, NoiseModel, apply_gate, depolarize, expectation, fidelity, run_circuit
from .exact_oracle import SpectrumResult, energy_scan, ground_state, matrix_exp_state

__all__ = [
    "DensityMatrix", "NoiseModel", "apply_gate", "depolarize", "expectation", "fidelity", "run_circuit",
    "SpectrumResult", "energy_scan", "ground_state", "matrix_exp_state",
]
