"""Parametric circuits: Hartree-Fock preparation, UCCSD and hardware-efficient layers."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Union

import numpy as np

from . import kernels
from .hamiltonians.fermion import FermionOp, occupied_qubits, qubit_image
from .pauli import PauliString
from .statevector import NoiseSpec, QuantumState, prepare_basis_state, random_pauli_error

GENERATOR_REAL_TOLERANCE = 1e-10


@dataclass(frozen=True)
class BasisPrep:
    qubits: tuple[int, ...]


@dataclass(frozen=True)
class PauliRotation:
    """``exp(-i * weight * theta[parameter_index] / 2 * string)``."""

    string: PauliString
    parameter_index: int
    weight: float = 1.0


@dataclass(frozen=True)
class Cnot:
    control: int
    target: int


Instruction = Union[BasisPrep, PauliRotation, Cnot]


class ExcitationKind(str, Enum):
    SINGLE = "single"
    DOUBLE = "double"


@dataclass(frozen=True)
class ExcitationSpec:
    kind: ExcitationKind
    from_orbitals: tuple[int, ...]
    to_orbitals: tuple[int, ...]

    def __post_init__(self):
        if set(self.from_orbitals) & set(self.to_orbitals):
            raise ValueError("occupied and virtual orbitals overlap")
        expected = 1 if self.kind is ExcitationKind.SINGLE else 2
        if len(self.from_orbitals) != expected or len(self.to_orbitals) != expected:
            raise ValueError(f"{self.kind.value} excitation needs {expected} orbitals per side")

    def operator(self) -> FermionOp:
        """Excitation operator ``T`` (virtual creators, then occupied annihilators)."""
        factors = [(a, True) for a in self.to_orbitals]
        factors += [(i, False) for i in reversed(self.from_orbitals)]
        return FermionOp.product(1.0, *factors)

    def generator(self) -> FermionOp:
        t = self.operator()
        return t - t.adjoint()


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    instructions: tuple
    n_parameters: int
    excitations: tuple = field(default=(), compare=False)
    name: str = "circuit"

    def __post_init__(self):
        if not self.instructions or not isinstance(self.instructions[0], BasisPrep):
            raise ValueError("a circuit starts with exactly one basis preparation")
        if any(isinstance(ins, BasisPrep) for ins in self.instructions[1:]):
            raise ValueError("a circuit holds exactly one basis preparation")
        for ins in self.instructions:
            if isinstance(ins, PauliRotation):
                if not 0 <= ins.parameter_index < self.n_parameters:
                    raise ValueError(f"parameter index {ins.parameter_index} out of range")
                if ins.string.n_qubits != self.n_qubits:
                    raise ValueError(f"rotation {ins.string.label} has wrong length")

    @property
    def reference_qubits(self) -> tuple[int, ...]:
        return self.instructions[0].qubits

    def two_qubit_gate_count(self) -> int:
        return sum(1 for slots in _gate_slots(self) for arity, _ in slots if arity == 2)


# --------------------------------------------------------------------------
# builders
# --------------------------------------------------------------------------

def enumerate_excitations(n_qubits: int, occupied) -> list[ExcitationSpec]:
    """Spin-conserving singles then doubles, each in lexicographic order.

    Spin orbitals use the block layout: alpha on ``[0, n/2)``, beta on ``[n/2, n)``.
    """
    occ = sorted(set(occupied))
    if not occ:
        raise ValueError("occupied set is empty")
    if len(occ) >= n_qubits:
        raise ValueError("no virtual orbitals left")
    if any(not 0 <= p < n_qubits for p in occ):
        raise ValueError("occupied orbital out of range")
    half = n_qubits // 2
    spin = lambda p: 0 if p < half else 1  # noqa: E731
    virt = [p for p in range(n_qubits) if p not in occ]

    singles = [
        ExcitationSpec(ExcitationKind.SINGLE, (i,), (a,))
        for i in occ for a in virt if spin(i) == spin(a)
    ]
    doubles = [
        ExcitationSpec(ExcitationKind.DOUBLE, (i, j), (a, b))
        for i, j in combinations(occ, 2)
        for a, b in combinations(virt, 2)
        if sorted((spin(i), spin(j))) == sorted((spin(a), spin(b)))
    ]
    return singles + doubles


def generator_rotations(exc: ExcitationSpec, n_qubits: int, mapping: str) -> list[tuple[PauliString, float]]:
    """Pauli strings and rotation weights realizing ``exp(theta * (T - T^dagger))``.

    ``T - T^dagger = i * sum_k g_k P_k`` with real ``g_k``, and ``exp(i theta g_k P_k)``
    is a Pauli rotation of angle ``-2 g_k theta``.
    """
    image = qubit_image(exc.generator(), n_qubits, mapping)
    out = []
    for s in sorted(image, key=lambda s: s.label):
        c = image[s]
        if abs(c.real) > GENERATOR_REAL_TOLERANCE:
            raise ValueError(f"generator image of {exc} is not anti-Hermitian")
        out.append((s, -2.0 * c.imag))
    return out


def build_uccsd(n_qubits: int, occupied, mapping: str = "jordan_wigner") -> Circuit:
    """First-order, single-step Trotterized UCCSD on top of the reference determinant.

    ``occupied`` lists occupied spin orbitals (modes); ``mapping`` selects how
    modes are encoded on qubits.
    """
    excitations = enumerate_excitations(n_qubits, occupied)
    instructions: list = [BasisPrep(tuple(occupied_qubits(occupied, n_qubits, mapping)))]
    for k, exc in enumerate(excitations):
        for string, weight in generator_rotations(exc, n_qubits, mapping):
            instructions.append(PauliRotation(string, k, weight))
    return Circuit(n_qubits, tuple(instructions), len(excitations), tuple(excitations), "uccsd")


def build_hardware_efficient(n_qubits: int, layers: int = 2, reference_qubits=()) -> Circuit:
    """``layers`` rounds of RY on every qubit plus a CNOT chain, then a final RY round."""
    if layers < 0:
        raise ValueError("layers must be >= 0")
    instructions: list = [BasisPrep(tuple(sorted(reference_qubits)))]
    k = 0
    for layer in range(layers + 1):
        for q in range(n_qubits):
            instructions.append(PauliRotation(PauliString.from_axes({q: "Y"}, n_qubits), k))
            k += 1
        if layer < layers:
            instructions.extend(Cnot(q, q + 1) for q in range(n_qubits - 1))
    return Circuit(n_qubits, tuple(instructions), k, (), f"hw_efficient[{layers}]")


# --------------------------------------------------------------------------
# execution
# --------------------------------------------------------------------------

def _apply_cnot(amps: np.ndarray, control: int, target: int):
    idx = np.nonzero((np.arange(amps.shape[0]) >> control) & 1)[0]
    sel = idx[((idx >> target) & 1) == 0]
    flipped = sel | (1 << target)
    amps[sel], amps[flipped] = amps[flipped].copy(), amps[sel].copy()


def _execute(circuit: Circuit, theta: np.ndarray, amps: np.ndarray, start: int = 1, stop=None):
    for ins in circuit.instructions[start:stop]:
        if isinstance(ins, PauliRotation):
            s = ins.string
            kernels.apply_pauli_rotation(
                amps, s.x_mask, s.z_mask, s.phase, ins.weight * theta[ins.parameter_index]
            )
        elif isinstance(ins, Cnot):
            _apply_cnot(amps, ins.control, ins.target)


def _check_theta(circuit: Circuit, theta) -> np.ndarray:
    theta = np.asarray(theta, dtype=float).reshape(-1)
    if theta.shape[0] != circuit.n_parameters:
        raise ValueError(f"expected {circuit.n_parameters} parameters, got {theta.shape[0]}")
    return theta


def bind(circuit: Circuit, theta) -> QuantumState:
    """Run ``circuit`` at parameters ``theta`` on an ideal simulator."""
    theta = _check_theta(circuit, theta)
    state = prepare_basis_state(circuit.n_qubits, circuit.reference_qubits)
    _execute(circuit, theta, state.amplitudes)
    return state


def _gate_slots(circuit: Circuit) -> list[list[tuple[int, tuple[int, ...]]]]:
    """Native-gate error slots ``(arity, qubits)`` per instruction.

    A weight-``w`` rotation compiles to basis changes on its X/Y qubits (before
    and after), a CNOT ladder of ``2(w-1)`` gates and one RZ; a weight-1
    rotation is a single native gate.
    """
    slots = []
    for ins in circuit.instructions:
        if isinstance(ins, BasisPrep):
            slots.append([(1, (q,)) for q in ins.qubits])
        elif isinstance(ins, Cnot):
            slots.append([(2, (ins.control, ins.target))])
        else:
            sup = ins.string.support
            if len(sup) == 0:
                slots.append([])
            elif len(sup) == 1:
                slots.append([(1, sup)])
            else:
                one = [(1, (q,)) for q in sup if ins.string.axis(q) in "XY"] * 2
                one.append((1, (sup[-1],)))
                two = [(2, (sup[k], sup[k + 1])) for k in range(len(sup) - 1)] * 2
                slots.append(one + two)
    return slots


@dataclass
class TrajectorySampler:
    """Stochastic Pauli-error trajectories of one circuit at fixed parameters."""

    circuit: Circuit
    theta: np.ndarray
    noise: NoiseSpec
    errors_applied: int = 0
    two_qubit_errors: int = 0

    def __post_init__(self):
        self.theta = _check_theta(self.circuit, self.theta)
        self._slots = _gate_slots(self.circuit)
        flat = [(i, a, q) for i, sl in enumerate(self._slots) for a, q in sl]
        self._slot_instr = np.array([i for i, _, _ in flat], dtype=np.int64)
        self._slot_arity = np.array([a for _, a, _ in flat], dtype=np.int64)
        self._slot_qubits = [q for _, _, q in flat]
        self._slot_p = np.where(self._slot_arity == 1, self.noise.p1, self.noise.p2)
        self._ideal = bind(self.circuit, self.theta).amplitudes

    def ideal(self) -> np.ndarray:
        return self._ideal

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        """One trajectory's final amplitudes."""
        hits = np.nonzero(rng.random(self._slot_p.shape[0]) < self._slot_p)[0]
        if hits.size == 0:
            return self._ideal
        n = self.circuit.n_qubits
        per_instr: dict[int, list] = {}
        for h in hits:
            err = random_pauli_error(n, self._slot_qubits[h], rng)
            if err is not None:
                per_instr.setdefault(int(self._slot_instr[h]), []).append(err)
                self.errors_applied += 1
                self.two_qubit_errors += int(self._slot_arity[h] == 2)
        if not per_instr:
            return self._ideal
        amps = prepare_basis_state(n, self.circuit.reference_qubits).amplitudes
        start = 1
        for i in sorted(per_instr):
            _execute(self.circuit, self.theta, amps, start, i + 1)
            for err in per_instr[i]:
                kernels.apply_pauli(amps, err.x_mask, err.z_mask, err.phase)
            start = i + 1
        _execute(self.circuit, self.theta, amps, start)
        return amps

    def trajectories(self, rng: np.random.Generator) -> list[np.ndarray]:
        return [self.sample(rng) for _ in range(self.noise.trajectories)]
