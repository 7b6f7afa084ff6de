from .evaluators import Evaluator
from .metrics import (
    CHEMICAL_ACCURACY_HA,
    chemical_accuracy,
    fidelity,
    iterations_to_reach,
    relative_error,
)
from .optimizers import (
    OptimizationError,
    OptimizeResult,
    OptimizerKind,
    OptimizerSpec,
    central_gradient,
    minimize,
)
from .repeats import run_repeats
from .vqe import (
    DeflationState,
    PhiResult,
    SolveResult,
    deflation_weight,
    phi_vqe,
    random_theta,
    select_partial,
    sharc_vqe,
    vqd,
    vqe,
)

__all__ = [
    "CHEMICAL_ACCURACY_HA", "DeflationState", "Evaluator", "OptimizationError", "OptimizeResult",
    "OptimizerKind", "OptimizerSpec", "PhiResult", "SolveResult", "central_gradient",
    "chemical_accuracy", "deflation_weight", "fidelity", "iterations_to_reach", "minimize",
    "phi_vqe", "random_theta", "relative_error", "run_repeats", "select_partial", "sharc_vqe",
    "vqd", "vqe",
]
