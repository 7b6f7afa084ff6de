"""Qubit Hamiltonian construction, fixtures and file I/O."""
from .fermion import (
    FermionOp,
    annihilate,
    create,
    jordan_wigner,
    map_operator,
    number,
    occupied_qubits,
    parity_encode,
    qubit_image,
)
from .fixtures import FIXTURES, Fixture, get_fixture, load_fixture
from .hubbard import HubbardSpec, build_hubbard, hubbard_fermion_op, number_operator
from .io import HamiltonianFileError, load_hamiltonian, parse_hamiltonian, save_hamiltonian
from .spectrum import exact_spectrum

__all__ = [
    "FIXTURES", "FermionOp", "Fixture", "HamiltonianFileError", "HubbardSpec",
    "annihilate", "build_hubbard", "create", "exact_spectrum", "get_fixture",
    "hubbard_fermion_op", "jordan_wigner", "load_fixture", "load_hamiltonian",
    "map_operator", "number", "number_operator", "occupied_qubits", "parity_encode",
    "parse_hamiltonian", "qubit_image", "save_hamiltonian",
]
