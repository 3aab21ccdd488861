#!/usr/bin/env python3
"""
NoisyLab - Parameter Optimizers

Two optimizers over circuit-energy objectives, both driven by scipy:

- gradient-free: COBYLA (linear approximations inside a trust region)
- quasi-Newton: L-BFGS-B fed with in-repo central finite-difference gradients

Both report the best point the objective has ever seen, so warm-started
re-optimizations never return a worse energy than their starting point.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize

try:
    from .config.settings import LabSettings
    from .utils.errors import OptimizationError
    from .utils.logger import get_logger
except ImportError:
    from config.settings import LabSettings
    from utils.errors import OptimizationError
    from utils.logger import get_logger


class OptimizerKind(str, Enum):
    GRADIENT_FREE = "cobyla"
    QUASI_NEWTON = "lbfgs"


LINE_SEARCH = "More-Thuente (scipy L-BFGS-B)"


@dataclass
class OptimizerConfig:
    """Budget and tolerances for one optimization."""

    kind: OptimizerKind = OptimizerKind.GRADIENT_FREE
    max_iterations: int = 1000
    tolerance: float = 1e-6
    fd_step: float = 1e-4
    initial_point: Optional[List[float]] = None
    rhobeg: float = 0.5
    memory: int = 10

    def __post_init__(self):
        self.kind = OptimizerKind(self.kind)
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be positive, got {self.max_iterations}")
        if self.tolerance <= 0 or self.fd_step <= 0:
            raise ValueError("tolerance and fd_step must be positive")

    @classmethod
    def for_kind(cls, kind: OptimizerKind, settings: Optional[LabSettings] = None, **overrides) -> "OptimizerConfig":
        """
        Defaults for an optimizer kind, taken from settings.

        Args:
            kind: optimizer kind
            settings: LabSettings to read budgets from (library defaults otherwise)
            **overrides: explicit field values, None entries ignored

        Returns:
            OptimizerConfig
        """
        settings = settings or LabSettings()
        kind = OptimizerKind(kind)
        if kind is OptimizerKind.GRADIENT_FREE:
            values = dict(max_iterations=settings.cobyla_max_iterations, tolerance=settings.cobyla_tolerance,
                          rhobeg=settings.cobyla_rhobeg, fd_step=settings.fd_step)
        else:
            values = dict(max_iterations=settings.lbfgs_max_iterations, tolerance=settings.lbfgs_tolerance,
                          memory=settings.lbfgs_memory, fd_step=settings.fd_step)
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(kind=kind, **values)

    def start(self, arity: int) -> np.ndarray:
        if self.initial_point is None:
            return np.zeros(arity)
        point = np.asarray(self.initial_point, dtype=float)
        if point.shape != (arity,):
            raise ValueError(f"Initial point has {point.size} entries, objective takes {arity}")
        return point

    def metadata(self) -> Dict[str, Any]:
        if self.kind is OptimizerKind.GRADIENT_FREE:
            return {"method": "COBYLA", "rhobeg": self.rhobeg, "tolerance": self.tolerance,
                    "max_iterations": self.max_iterations}
        return {"method": "L-BFGS-B", "memory": self.memory, "line_search": LINE_SEARCH,
                "gradient": "central differences", "fd_step": self.fd_step,
                "tolerance": self.tolerance, "max_iterations": self.max_iterations}


class Objective:
    """
    Counted, finiteness-checked wrapper around an energy function.

    Also remembers the lowest value seen and where it was seen.
    """

    def __init__(self, function: Callable[[np.ndarray], float], arity: int, name: str = "energy"):
        self.function = function
        self.arity = arity
        self.name = name
        self.evaluations = 0
        self.best_value = math.inf
        self.best_parameters: Optional[np.ndarray] = None
        self.logger = get_logger()

    def __call__(self, parameters: Sequence[float]) -> float:
        x = np.array(parameters, dtype=float).reshape(self.arity)
        value = float(self.function(x))
        self.evaluations += 1
        if not math.isfinite(value):
            raise OptimizationError(
                f"Objective {self.name} returned {value} at parameters {x.tolist()} "
                f"(evaluation {self.evaluations})"
            )
        if value < self.best_value:
            self.best_value = value
            self.best_parameters = x.copy()
        self.logger.debug(f"{self.name}#{self.evaluations}: {value:.12f} at {np.round(x, 8).tolist()}", "OPT")
        return value


@dataclass
class OptimizationResult:
    parameters: np.ndarray
    energy: float
    evaluations: int
    converged: bool
    message: str = ""
    metadata: Dict[str, Any] = field(default_factory=dict)


def central_difference_gradient(obj: Callable[[np.ndarray], float], params: Sequence[float],
                                step: float = 1e-4) -> np.ndarray:
    """g_i = (f(x + h e_i) - f(x - h e_i)) / 2h."""
    x = np.asarray(params, dtype=float)
    gradient = np.zeros_like(x)
    for i in range(x.size):
        shift = np.zeros_like(x)
        shift[i] = step
        gradient[i] = (obj(x + shift) - obj(x - shift)) / (2 * step)
    return gradient


def gradient_converged(function: Callable[[np.ndarray], float], params: Sequence[float],
                       cfg: OptimizerConfig) -> bool:
    """
    Max-norm of the central-difference gradient at `params` below cfg.tolerance.

    Pass the bare energy function rather than an Objective so the check does
    not move the recorded best point.
    """
    gradient = central_difference_gradient(function, params, cfg.fd_step)
    return bool(np.max(np.abs(gradient)) < cfg.tolerance)


def _finish(obj: Objective, cfg: OptimizerConfig, converged: bool, message: str) -> OptimizationResult:
    result = OptimizationResult(
        parameters=obj.best_parameters.copy(),
        energy=obj.best_value,
        evaluations=obj.evaluations,
        converged=converged,
        message=message,
        metadata=cfg.metadata(),
    )
    obj.logger.log_optimizer_result(cfg.kind.value, result.energy, result.evaluations,
                                    result.converged, result.parameters)
    return result


def minimize_gradient_free(obj: Objective, cfg: OptimizerConfig) -> OptimizationResult:
    """
    COBYLA minimization.

    Converged is true when the trust region shrinks below `tolerance` before
    the evaluation budget runs out.
    """
    if cfg.kind is not OptimizerKind.GRADIENT_FREE:
        raise ValueError(f"minimize_gradient_free called with a {cfg.kind.value} config")
    if obj.arity < 1:
        raise ValueError("Objective needs at least one parameter")

    x0 = cfg.start(obj.arity)
    obj(x0)
    outcome = minimize(obj, x0, method="COBYLA", tol=cfg.tolerance,
                       options={"rhobeg": cfg.rhobeg, "maxiter": cfg.max_iterations})
    return _finish(obj, cfg, bool(outcome.success), str(outcome.message))


def minimize_quasi_newton(obj: Objective, cfg: OptimizerConfig) -> OptimizationResult:
    """
    L-BFGS minimization with central-difference gradients.

    Converged means the largest central-difference gradient component at the
    returned point is below `tolerance`; stopping on a stalled energy or a
    failed line search is not convergence, and neither is an error.
    """
    if cfg.kind is not OptimizerKind.QUASI_NEWTON:
        raise ValueError(f"minimize_quasi_newton called with a {cfg.kind.value} config")
    if obj.arity < 1:
        raise ValueError("Objective needs at least one parameter")

    def value_and_gradient(x: np.ndarray) -> Tuple[float, np.ndarray]:
        return obj(x), central_difference_gradient(obj, x, cfg.fd_step)

    x0 = cfg.start(obj.arity)
    outcome = minimize(value_and_gradient, x0, method="L-BFGS-B", jac=True,
                       options={"maxiter": cfg.max_iterations, "maxfun": cfg.max_iterations,
                                "gtol": cfg.tolerance, "ftol": 1e-15, "maxcor": cfg.memory})
    converged = gradient_converged(obj.function, obj.best_parameters, cfg)
    return _finish(obj, cfg, converged, str(outcome.message))


def run_optimizer(obj: Objective, cfg: OptimizerConfig) -> OptimizationResult:
    """Dispatch on cfg.kind."""
    if cfg.kind is OptimizerKind.GRADIENT_FREE:
        return minimize_gradient_free(obj, cfg)
    return minimize_quasi_newton(obj, cfg)
