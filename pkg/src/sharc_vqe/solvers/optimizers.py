"""Optimizers driving the variational loops."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

import numpy as np


class OptimizerKind(str, Enum):
    SPSA = "spsa"
    FINITE_DIFFERENCE_DESCENT = "finite_difference_descent"

    @classmethod
    def parse(cls, value) -> "OptimizerKind":
        aliases = {"fd": cls.FINITE_DIFFERENCE_DESCENT}
        return aliases.get(value) or cls(value)


class OptimizationError(RuntimeError):
    pass


@dataclass(frozen=True)
class OptimizerSpec:
    """Optimizer settings.

    SPSA gains are ``a_k = a / (A + k + 1)**alpha`` and ``c_k = c / (k + 1)**gamma``;
    ``A`` defaults to ``0.05 * max_iterations``. The descent variant uses a
    central-difference gradient with step ``fd_step`` and a backtracking
    (Armijo) line search.
    """

    kind: OptimizerKind = OptimizerKind.FINITE_DIFFERENCE_DESCENT
    max_iterations: int = 200
    seed: int = 0
    convergence_tol: float = 1e-9
    patience: int = 5
    a: float = 0.15
    c: float = 0.1
    A: float | None = None
    alpha: float = 0.602
    gamma: float = 0.101
    fd_step: float = 1e-5
    initial_step: float = 1.0
    max_step: float = 8.0
    armijo: float = 1e-4
    max_backtracks: int = 40
    step_memory: bool = False

    def __post_init__(self):
        object.__setattr__(self, "kind", OptimizerKind.parse(self.kind))
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if not self.convergence_tol > 0:
            raise ValueError("convergence_tol must be positive")

    @property
    def stability(self) -> float:
        return 0.05 * self.max_iterations if self.A is None else self.A


@dataclass
class OptimizeResult:
    theta: np.ndarray
    trace: list[float]
    initial_value: float | None
    iterations: int
    n_evaluations: int
    converged: bool
    message: str = ""
    line_search_evaluations: int = 0
    extra: dict = field(default_factory=dict)


class _Counted:
    def __init__(self, fn):
        self.fn = fn
        self.calls = 0

    def __call__(self, theta):
        self.calls += 1
        value = float(self.fn(theta))
        if not math.isfinite(value):
            raise OptimizationError(
                f"objective returned {value} at theta={np.array2string(np.asarray(theta), precision=4)}"
            )
        return value


def _plateaued(trace, tol, patience) -> bool:
    if len(trace) <= patience:
        return False
    recent = np.abs(np.diff(trace[-(patience + 1):]))
    return bool(np.all(recent < tol))


def _spsa(f: _Counted, spec: OptimizerSpec, theta: np.ndarray, callback) -> OptimizeResult:
    rng = np.random.default_rng(spec.seed)
    trace: list[float] = []
    converged = False
    k = 0
    for k in range(spec.max_iterations):
        a_k = spec.a / (spec.stability + k + 1) ** spec.alpha
        c_k = spec.c / (k + 1) ** spec.gamma
        delta = rng.choice((-1.0, 1.0), size=theta.shape[0])
        e_plus = f(theta + c_k * delta)
        e_minus = f(theta - c_k * delta)
        grad = (e_plus - e_minus) / (2.0 * c_k) * delta
        theta = theta - a_k * grad
        trace.append(0.5 * (e_plus + e_minus))
        if callback is not None:
            callback(k, theta, trace[-1])
        if _plateaued(trace, spec.convergence_tol, spec.patience):
            converged = True
            break
    return OptimizeResult(theta, trace, None, len(trace), f.calls, converged,
                          "plateau" if converged else "max_iterations")


def central_gradient(f, theta: np.ndarray, h: float) -> np.ndarray:
    grad = np.empty_like(theta)
    for p in range(theta.shape[0]):
        step = np.zeros_like(theta)
        step[p] = h
        grad[p] = (f(theta + step) - f(theta - step)) / (2.0 * h)
    return grad


def _descent(f: _Counted, spec: OptimizerSpec, theta: np.ndarray, callback) -> OptimizeResult:
    value = f(theta)
    initial = value
    trace: list[float] = []
    step = spec.initial_step
    ls_evals = 0
    converged, message = False, "max_iterations"
    while len(trace) < spec.max_iterations:
        grad = central_gradient(f, theta, spec.fd_step)
        gnorm2 = float(grad @ grad)
        if gnorm2 < 1e-24:
            converged, message = True, "zero gradient"
            break
        step = min(2.0 * step, spec.max_step) if spec.step_memory else spec.initial_step
        for _ in range(spec.max_backtracks):
            candidate = theta - step * grad
            new_value = f(candidate)
            ls_evals += 1
            if new_value <= value - spec.armijo * step * gnorm2:
                break
            step *= 0.5
        else:
            converged, message = True, "line search stalled"
            break
        theta, value = candidate, new_value
        trace.append(value)
        if callback is not None:
            callback(len(trace) - 1, theta, value)
        if _plateaued(trace, spec.convergence_tol, spec.patience):
            converged, message = True, "plateau"
            break
    return OptimizeResult(theta, trace, initial, len(trace), f.calls, converged, message, ls_evals)


def minimize(objective: Callable[[np.ndarray], float], spec: OptimizerSpec, theta0,
             callback=None) -> OptimizeResult:
    """Minimize ``objective`` from ``theta0``.

    Stops after ``max_iterations`` or once ``patience`` consecutive iterations
    change the recorded value by less than ``convergence_tol``.
    """
    theta = np.array(theta0, dtype=float).reshape(-1)
    f = _Counted(objective)
    if spec.kind is OptimizerKind.SPSA:
        return _spsa(f, spec, theta, callback)
    return _descent(f, spec, theta, callback)
