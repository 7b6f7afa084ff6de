"""Open-chain Fermi-Hubbard Hamiltonian."""
from __future__ import annotations

from dataclasses import dataclass

from ..pauli import PauliSum
from .fermion import FermionOp, create, annihilate, number, map_operator


@dataclass(frozen=True)
class HubbardSpec:
    n_sites: int
    t: float = -1.0
    U: float = 5.0
    boundary: str = "open"

    def __post_init__(self):
        if self.n_sites < 1:
            raise ValueError("n_sites must be >= 1")
        if self.boundary != "open":
            raise ValueError("only open boundary conditions are supported")

    @property
    def n_modes(self) -> int:
        return 2 * self.n_sites


def mode_index(site: int, spin: int) -> int:
    """Interleaved layout: spin-up on even modes, spin-down on odd modes."""
    return 2 * site + spin


def hubbard_fermion_op(spec: HubbardSpec) -> FermionOp:
    op = FermionOp()
    for i in range(spec.n_sites - 1):
        for spin in (0, 1):
            a, b = mode_index(i, spin), mode_index(i + 1, spin)
            op = op + (create(a) * annihilate(b)).scale(spec.t) + (create(b) * annihilate(a)).scale(spec.t)
    for i in range(spec.n_sites):
        op = op + (number(mode_index(i, 0)) * number(mode_index(i, 1))).scale(spec.U)
    return op


def build_hubbard(spec: HubbardSpec, mapping: str = "jordan_wigner") -> PauliSum:
    return map_operator(hubbard_fermion_op(spec), spec.n_modes, mapping)


def number_operator(n_modes: int, mapping: str = "jordan_wigner") -> PauliSum:
    op = FermionOp()
    for p in range(n_modes):
        op = op + number(p)
    return map_operator(op, n_modes, mapping)
