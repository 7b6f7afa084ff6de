"""Dense statevector simulation, shot sampling and a parametric noise model."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from . import kernels
from .pauli import PauliError, PauliString, PauliSum, is_easy, qubitwise_commutes

NORM_TOLERANCE = 1e-10

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_SDG = np.array([[1, 0], [0, -1j]], dtype=complex)
# rotations taking the X / Y eigenbasis onto the computational basis
_BASIS_CHANGE = {"X": _H, "Y": _H @ _SDG}


@dataclass
class QuantumState:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.shape != (1 << self.n_qubits,):
            raise ValueError(
                f"expected {1 << self.n_qubits} amplitudes, got {self.amplitudes.shape}"
            )

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def copy(self) -> "QuantumState":
        return QuantumState(self.n_qubits, self.amplitudes.copy())


@dataclass(frozen=True)
class NoiseSpec:
    """Depolarizing gate noise plus symmetric readout flips.

    ``trajectories`` is the number of stochastic Pauli-error trajectories
    averaged per circuit execution.
    """

    p1: float = 1e-3
    p2: float = 1e-2
    readout_flip: float = 1e-2
    seed: int = 0
    trajectories: int = 32

    def __post_init__(self):
        for name in ("p1", "p2"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name}={v} outside [0, 1]")
        if not 0.0 <= self.readout_flip <= 0.5:
            raise ValueError(f"readout_flip={self.readout_flip} outside [0, 0.5]")
        if self.seed < 0:
            raise ValueError("seed must be unsigned")
        if self.trajectories < 1:
            raise ValueError("trajectories must be >= 1")


class Grouping(str, Enum):
    UNGROUPED = "ungrouped"
    EASY_SINGLE_GROUP = "easy_single_group"
    QUBITWISE_COMMUTING = "qubitwise_commuting"


@dataclass(frozen=True)
class ShotPlan:
    shots_per_group: int = 8192
    grouping: Grouping = Grouping.UNGROUPED

    def __post_init__(self):
        if self.shots_per_group < 1:
            raise ValueError("shots_per_group must be >= 1")
        object.__setattr__(self, "grouping", Grouping(self.grouping))


def prepare_basis_state(n_qubits: int, occupied) -> QuantumState:
    index = 0
    for q in occupied:
        if not 0 <= q < n_qubits:
            raise ValueError(f"qubit index {q} out of range for {n_qubits} qubits")
        index |= 1 << q
    amps = np.zeros(1 << n_qubits, dtype=np.complex128)
    amps[index] = 1.0
    return QuantumState(n_qubits, amps)


def apply_pauli_rotation(state: QuantumState, string: PauliString, angle: float) -> QuantumState:
    """Return ``exp(-i angle/2 P) |state>``."""
    if string.n_qubits != state.n_qubits:
        raise PauliError(f"{string.label!r} does not act on {state.n_qubits} qubits")
    out = state.copy()
    kernels.apply_pauli_rotation(out.amplitudes, string.x_mask, string.z_mask, string.phase, float(angle))
    return out


def apply_pauli(state: QuantumState, string: PauliString) -> QuantumState:
    out = state.copy()
    kernels.apply_pauli(out.amplitudes, string.x_mask, string.z_mask, string.phase)
    return out


def _check_dims(amplitudes: np.ndarray, h: PauliSum):
    if amplitudes.shape[0] != 1 << h.n_qubits:
        raise ValueError(
            f"state of dimension {amplitudes.shape[0]} vs {h.n_qubits}-qubit observable"
        )


def pauli_expectations(amplitudes: np.ndarray, h: PauliSum) -> np.ndarray:
    """Per-term ``<psi|P_i|psi>`` in term order."""
    _check_dims(amplitudes, h)
    if not len(h):
        return np.zeros(0)
    xs, zs, ph, _ = h.masks()
    return kernels.pauli_expectations(amplitudes, xs, zs, ph)


def expectation_exact(state, h: PauliSum) -> float:
    amps = state.amplitudes if isinstance(state, QuantumState) else np.asarray(state)
    if not len(h):
        _check_dims(amps, h)
        return h.offset * float(np.vdot(amps, amps).real)
    return float(h.offset + np.dot(h.coefficients, pauli_expectations(amps, h)))


# --------------------------------------------------------------------------
# measurement grouping
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class MeasurementGroup:
    term_indices: tuple[int, ...]
    basis: dict = field(default_factory=dict)  # qubit -> "X" | "Y" | "Z"

    @property
    def needs_rotation(self) -> bool:
        return any(a in "XY" for a in self.basis.values())


def _group_basis(strings: Sequence[PauliString]) -> dict:
    basis = {}
    for s in strings:
        for q in s.support:
            basis[q] = s.axis(q)
    return basis


def measurement_groups(h: PauliSum, grouping) -> list[MeasurementGroup]:
    """Partition the terms of ``h`` into jointly measured groups.

    Every term (the identity included) belongs to exactly one group, so an
    ungrouped evaluation executes ``len(h)`` circuits.
    """
    grouping = Grouping(grouping)
    strings = h.strings
    if grouping is Grouping.UNGROUPED:
        idx_groups = [[i] for i in range(len(strings))]
    elif grouping is Grouping.EASY_SINGLE_GROUP:
        easy = [i for i, s in enumerate(strings) if is_easy(s)]
        idx_groups = ([easy] if easy else []) + [[i] for i, s in enumerate(strings) if not is_easy(s)]
    else:
        # sorted insertion: heaviest terms seed the groups
        order = sorted(range(len(strings)), key=lambda i: -abs(h.terms[i].coefficient))
        idx_groups = []
        for i in order:
            for g in idx_groups:
                if all(qubitwise_commutes(strings[i], strings[j]) for j in g):
                    g.append(i)
                    break
            else:
                idx_groups.append([i])
        idx_groups = [sorted(g) for g in idx_groups]
        idx_groups.sort()
    return [
        MeasurementGroup(tuple(g), _group_basis([strings[i] for i in g])) for g in idx_groups
    ]


def _apply_1q(amps: np.ndarray, n_qubits: int, q: int, u: np.ndarray) -> np.ndarray:
    t = amps.reshape(-1, 2, 1 << q)
    return np.einsum("ab,ibj->iaj", u, t).reshape(-1)


def rotate_to_basis(amps: np.ndarray, n_qubits: int, basis: dict) -> np.ndarray:
    out = amps
    for q, axis in sorted(basis.items()):
        if axis in _BASIS_CHANGE:
            out = _apply_1q(out, n_qubits, q, _BASIS_CHANGE[axis])
    return out


def _flip_probabilities(n_qubits: int, basis: dict, noise: NoiseSpec | None) -> np.ndarray:
    """Per-qubit readout flip probability including basis-change gate errors.

    A depolarizing event after the basis-change gate draws a uniformly random
    Pauli (identity included), which flips the measured bit half the time.
    """
    flips = np.zeros(n_qubits)
    if noise is None:
        return flips
    for q in range(n_qubits):
        e = 0.5 * noise.p1 if basis.get(q) in ("X", "Y") else 0.0
        r = noise.readout_flip
        flips[q] = r * (1.0 - e) + e * (1.0 - r)
    return flips


def _confuse(probs: np.ndarray, flips: np.ndarray) -> np.ndarray:
    out = probs
    for q, f in enumerate(flips):
        if f:
            t = out.reshape(-1, 2, 1 << q)
            out = ((1.0 - f) * t + f * t[:, ::-1, :]).reshape(-1)
    return out


StateSource = Callable[[np.random.Generator], Sequence[np.ndarray]]


def sample_group_expectations(
    source: StateSource,
    h: PauliSum,
    groups: Sequence[MeasurementGroup],
    shots: int,
    noise: NoiseSpec | None,
    rng: np.random.Generator,
) -> np.ndarray:
    """Shot-sampled estimates of every ``<P_i>`` of ``h``.

    ``source(rng)`` yields the amplitude vectors (noise trajectories) of one
    circuit execution; it is called once per measurement group. The sampled
    distribution is the trajectory average, pushed through readout noise.
    """
    n = h.n_qubits
    strings = h.strings
    est = np.empty(len(h))
    for g in groups:
        if all(strings[i].weight == 0 for i in g.term_indices):
            est[list(g.term_indices)] = 1.0
            continue
        probs = None
        trajectories = source(rng)
        for amps in trajectories:
            p = np.abs(rotate_to_basis(amps, n, g.basis)) ** 2
            probs = p if probs is None else probs + p
        probs = probs / len(trajectories)
        probs = _confuse(probs, _flip_probabilities(n, g.basis, noise))
        probs = np.clip(probs, 0.0, None)
        counts = rng.multinomial(shots, probs / probs.sum()).astype(float)
        masks = np.array(
            [sum(1 << q for q in strings[i].support) for i in g.term_indices], dtype=np.int64
        )
        est[list(g.term_indices)] = kernels.parity_expectations(counts, masks)
    return est


def expectation_sampled(
    state: QuantumState,
    h: PauliSum,
    plan: ShotPlan,
    noise: NoiseSpec | None = None,
    seed: int = 0,
) -> tuple[float, float]:
    """Shot-sampled ``<h>`` on a fixed state; returns ``(energy, variance_estimate)``.

    Only measurement-stage noise applies here (basis-change gate errors and
    readout flips); gate noise during state preparation needs a circuit, see
    :func:`sharc_vqe.ansatz.sample_trajectories`.
    """
    _check_dims(state.amplitudes, h)
    rng = np.random.default_rng(seed)
    groups = measurement_groups(h, plan.grouping)
    est = sample_group_expectations(
        lambda _rng: [state.amplitudes], h, groups, plan.shots_per_group, noise, rng
    )
    return estimate_energy(h, est, plan.shots_per_group)


def estimate_energy(h: PauliSum, estimates: np.ndarray, shots: int) -> tuple[float, float]:
    c = h.coefficients
    if not len(h):
        return h.offset, 0.0
    energy = float(h.offset + np.dot(c, estimates))
    var = float(np.sum(c**2 * np.clip(1.0 - estimates**2, 0.0, None)) / shots)
    return energy, var


def analytic_mse(h: PauliSum, amplitudes: np.ndarray, shots) -> np.ndarray:
    """``sum_i c_i^2 (1 - <P_i>^2) / S`` for independently measured terms.

    Identity strings carry no statistical error.
    """
    exps = pauli_expectations(amplitudes, h)
    weights = np.array([s.weight > 0 for s in h.strings], dtype=float)
    var_sum = float(np.sum(weights * h.coefficients**2 * np.clip(1.0 - exps**2, 0.0, None)))
    return var_sum / np.asarray(shots, dtype=float)


# --------------------------------------------------------------------------
# depolarizing noise
# --------------------------------------------------------------------------

def random_pauli_error(n_qubits: int, targets: Sequence[int], rng: np.random.Generator):
    """Uniform draw from all ``4**k`` Paulis on ``targets`` (identity included)."""
    axes = rng.integers(0, 4, size=len(targets))
    if not axes.any():
        return None
    return PauliString.from_axes({q: "IXYZ"[a] for q, a in zip(targets, axes) if a}, n_qubits)


def apply_depolarizing(
    state: QuantumState,
    spec: NoiseSpec,
    gate_arity: int,
    targets: Sequence[int],
    rng: np.random.Generator,
) -> tuple[QuantumState, bool]:
    """Stochastic depolarizing step on one trajectory.

    With probability ``p1`` / ``p2`` (by ``gate_arity``) the targets are
    replaced by the maximally mixed state, unravelled as a uniformly random
    Pauli. Returns the state and whether a non-identity error was applied.
    """
    if gate_arity not in (1, 2):
        raise ValueError("gate_arity must be 1 or 2")
    if len(targets) != gate_arity:
        raise ValueError(f"{gate_arity}-qubit channel needs {gate_arity} targets")
    for q in targets:
        if not 0 <= q < state.n_qubits:
            raise ValueError(f"target {q} out of range")
    p = spec.p1 if gate_arity == 1 else spec.p2
    if p == 0.0 or rng.random() >= p:
        return state, False
    err = random_pauli_error(state.n_qubits, targets, rng)
    if err is None:
        return state, False
    return apply_pauli(state, err), True
