"""Bundled Hamiltonians and the metadata needed to build ansatz circuits."""
from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from ..pauli import PauliSum
from .fermion import occupied_qubits
from .io import parse_hamiltonian


@dataclass(frozen=True)
class Fixture:
    name: str
    filename: str
    mapping: str
    occupied_modes: tuple[int, ...]
    description: str

    def load(self) -> PauliSum:
        text = resources.files(__package__).joinpath("data", self.filename).read_text("utf-8")
        return parse_hamiltonian(text, self.filename)

    @property
    def hf_qubits(self) -> list[int]:
        h = self.load()
        return occupied_qubits(self.occupied_modes, h.n_qubits, self.mapping)


FIXTURES = {
    "h2": Fixture("h2", "h2_sto3g.txt", "parity", (0, 2),
                  "H2 full qubit Hamiltonian incl. nuclear repulsion"),
    "h2-1e": Fixture("h2-1e", "h2_one_electron.txt", "parity", (0, 2),
                     "H2 one-electron block"),
    "h2-2e": Fixture("h2-2e", "h2_two_electron.txt", "parity", (0, 2),
                     "H2 two-electron block"),
    "hubbard2": Fixture("hubbard2", "hubbard2.txt", "jordan_wigner", (0, 1),
                        "2-site Fermi-Hubbard chain, t=-1, U=5"),
}


def get_fixture(name: str) -> Fixture:
    try:
        return FIXTURES[name]
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; choose from {sorted(FIXTURES)}") from None


def load_fixture(name: str) -> PauliSum:
    return get_fixture(name).load()
