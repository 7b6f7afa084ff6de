"""Second-quantized operators and their qubit images.

Two encodings are provided. Jordan-Wigner stores occupations directly on the
qubits; the parity encoding stores the running parity ``p_j = n_0 ^ ... ^ n_j``
(the encoding of the bundled H2 Hamiltonian).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from ..pauli import PauliError, PauliString, PauliSum, PauliTerm, multiply

IMAG_TOLERANCE = 1e-10
MAPPINGS = ("jordan_wigner", "parity")

Ladder = tuple[int, bool]  # (mode, is_creation)


@dataclass(frozen=True)
class FermionOp:
    """Sum of coefficient-weighted products of ladder operators.

    Each product is read left to right as written, e.g. ``((1, True), (0, False))``
    is ``a+_1 a_0``.
    """

    terms: tuple[tuple[complex, tuple[Ladder, ...]], ...] = ()

    @classmethod
    def product(cls, coefficient: complex, *factors: Ladder) -> "FermionOp":
        return cls(((coefficient, tuple(factors)),))

    @property
    def max_mode(self) -> int:
        return max((m for _, f in self.terms for m, _ in f), default=-1)

    def __add__(self, other: "FermionOp") -> "FermionOp":
        return FermionOp(self.terms + other.terms)

    def __sub__(self, other: "FermionOp") -> "FermionOp":
        return self + other.scale(-1.0)

    def __mul__(self, other: "FermionOp") -> "FermionOp":
        return FermionOp(
            tuple((c1 * c2, f1 + f2) for c1, f1 in self.terms for c2, f2 in other.terms)
        )

    def scale(self, factor: complex) -> "FermionOp":
        return FermionOp(tuple((factor * c, f) for c, f in self.terms))

    def adjoint(self) -> "FermionOp":
        return FermionOp(
            tuple(
                (complex(c).conjugate() if isinstance(c, complex) else c,
                 tuple((m, not cr) for m, cr in reversed(f)))
                for c, f in self.terms
            )
        )


def create(p: int) -> FermionOp:
    return FermionOp.product(1.0, (p, True))


def annihilate(p: int) -> FermionOp:
    return FermionOp.product(1.0, (p, False))


def number(p: int) -> FermionOp:
    return FermionOp.product(1.0, (p, True), (p, False))


def _ladder_image(mode: int, creation: bool, n_modes: int, mapping: str) -> dict[PauliString, complex]:
    imag = -0.5j if creation else 0.5j
    if mapping == "jordan_wigner":
        tail = {q: "Z" for q in range(mode)}
        x = PauliString.from_axes({**tail, mode: "X"}, n_modes)
        y = PauliString.from_axes({**tail, mode: "Y"}, n_modes)
    elif mapping == "parity":
        tail = {q: "X" for q in range(mode + 1, n_modes)}
        below = {mode - 1: "Z"} if mode > 0 else {}
        x = PauliString.from_axes({**tail, **below, mode: "X"}, n_modes)
        y = PauliString.from_axes({**tail, mode: "Y"}, n_modes)
    else:
        raise ValueError(f"unknown mapping {mapping!r}; expected one of {MAPPINGS}")
    return {x: 0.5, y: imag}


def qubit_image(op: FermionOp, n_modes: int, mapping: str = "jordan_wigner") -> dict[PauliString, complex]:
    """Expand ``op`` into ``{PauliString: complex coefficient}``."""
    if op.max_mode >= n_modes:
        raise PauliError(f"mode {op.max_mode} out of range for {n_modes} modes")
    identity = PauliString.identity(n_modes)
    total: dict[PauliString, complex] = {}
    for coefficient, factors in op.terms:
        acc = {identity: complex(coefficient)}
        for mode, creation in factors:
            image = _ladder_image(mode, creation, n_modes, mapping)
            nxt: dict[PauliString, complex] = {}
            for s1, c1 in acc.items():
                for s2, c2 in image.items():
                    phase, s = multiply(s1, s2)
                    nxt[s] = nxt.get(s, 0) + phase * c1 * c2
            acc = nxt
        for s, c in acc.items():
            total[s] = total.get(s, 0) + c
    return {s: c for s, c in total.items() if abs(c) >= 1e-12}


def _real_sum(image: dict[PauliString, complex], n_modes: int) -> PauliSum:
    worst = max((abs(c.imag) for c in image.values()), default=0.0)
    if worst > IMAG_TOLERANCE:
        raise PauliError(
            f"qubit image has imaginary coefficient {worst:.3g}; operator is not Hermitian"
        )
    return PauliSum(n_modes, tuple(PauliTerm(float(c.real), s) for s, c in image.items()))


def jordan_wigner(op: FermionOp, n_modes: int) -> PauliSum:
    return _real_sum(qubit_image(op, n_modes, "jordan_wigner"), n_modes)


def parity_encode(op: FermionOp, n_modes: int) -> PauliSum:
    return _real_sum(qubit_image(op, n_modes, "parity"), n_modes)


def map_operator(op: FermionOp, n_modes: int, mapping: str = "jordan_wigner") -> PauliSum:
    return _real_sum(qubit_image(op, n_modes, mapping), n_modes)


def occupied_qubits(occupied_modes: Iterable[int], n_modes: int, mapping: str) -> list[int]:
    """Qubits set to 1 in the basis state with the given modes occupied."""
    occ = sorted(set(occupied_modes))
    for m in occ:
        if not 0 <= m < n_modes:
            raise ValueError(f"mode {m} out of range for {n_modes} modes")
    if mapping == "jordan_wigner":
        return occ
    if mapping == "parity":
        out, parity = [], 0
        for j in range(n_modes):
            parity ^= int(j in occ)
            if parity:
                out.append(j)
        return out
    raise ValueError(f"unknown mapping {mapping!r}")
