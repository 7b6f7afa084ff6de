"""SHARC-VQE: simplified-Hamiltonian VQE with refinement and correction.

Qubit Hamiltonians are split by execution cost and coefficient size; the
variational loop runs on a diagonal surrogate measured with one circuit and
the final energy restores the true hard-to-measure terms.
"""
from ._backend import BACKEND
from .ansatz import Circuit, build_hardware_efficient, build_uccsd, bind
from .hamiltonians import (
    build_hubbard,
    exact_spectrum,
    get_fixture,
    jordan_wigner,
    load_fixture,
    load_hamiltonian,
    save_hamiltonian,
)
from .pauli import PauliString, PauliSum, PauliTerm, is_easy, multiply, parse_term, to_dense_matrix
from .sharc import (
    SharcConfig,
    corrected_energy,
    fit_refined_operator,
    k_ph,
    partition,
    prepare_sharc,
    select_refinement_strings,
)
from .solvers import Evaluator, OptimizerSpec, SolveResult, phi_vqe, sharc_vqe, vqd, vqe
from .statevector import Grouping, NoiseSpec, QuantumState, ShotPlan, expectation_exact, expectation_sampled

__version__ = "0.1.0"
