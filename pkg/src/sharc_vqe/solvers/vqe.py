"""Variational loops: VQE, SHARC-VQE, VQD deflation and PHI-VQE warm starts."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..ansatz import Circuit, bind
from ..pauli import PauliSum, is_easy
from ..sharc import SharcConfig, SharcSetup, k_ph, prepare_sharc
from ..statevector import Grouping
from .evaluators import Evaluator
from .metrics import fidelity, iterations_to_reach
from .optimizers import OptimizerSpec, minimize


@dataclass
class SolveResult:
    """Outcome of one variational solve.

    ``energy_trace`` holds one objective value per optimizer iteration (line
    search evaluations are counted in ``n_evaluations`` only). ``raw_energy``
    is the final value of the in-loop observable; ``corrected_energy`` is set
    by SHARC runs.
    """

    method: str
    final_theta: np.ndarray
    energy_trace: list[float]
    raw_energy: float
    corrected_energy: float | None
    n_circuit_groups_executed: int
    n_evaluations: int
    seed: int
    iterations: int
    converged: bool
    initial_energy: float | None = None
    fidelity_vs_reference: float | None = None
    extra: dict = field(default_factory=dict)

    @property
    def energy(self) -> float:
        """Best estimate of the full-Hamiltonian energy."""
        return self.raw_energy if self.corrected_energy is None else self.corrected_energy

    @property
    def groups_per_evaluation(self) -> float:
        return self.n_circuit_groups_executed / max(self.n_evaluations, 1)

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "seed": self.seed,
            "final_theta": [float(t) for t in self.final_theta],
            "energy_trace": [float(e) for e in self.energy_trace],
            "initial_energy": self.initial_energy,
            "raw_energy": self.raw_energy,
            "corrected_energy": self.corrected_energy,
            "energy": self.energy,
            "iterations": self.iterations,
            "converged": self.converged,
            "n_evaluations": self.n_evaluations,
            "n_circuit_groups_executed": self.n_circuit_groups_executed,
            "groups_per_evaluation": self.groups_per_evaluation,
            "fidelity_vs_reference": self.fidelity_vs_reference,
            **({"extra": self.extra} if self.extra else {}),
        }


def _theta0(circuit: Circuit, theta0) -> np.ndarray:
    if theta0 is None:
        return np.zeros(circuit.n_parameters)
    theta0 = np.asarray(theta0, dtype=float).reshape(-1)
    if theta0.shape[0] != circuit.n_parameters:
        raise ValueError(f"theta0 has {theta0.shape[0]} entries, circuit needs {circuit.n_parameters}")
    return theta0


def random_theta(circuit: Circuit, seed: int, scale: float = 0.1) -> np.ndarray:
    """Uniform draw from ``[-scale, scale]`` for every parameter."""
    return np.random.default_rng(seed).uniform(-scale, scale, circuit.n_parameters)


def _fidelity(circuit, theta, reference):
    if reference is None:
        return None
    return fidelity(bind(circuit, theta), reference)


def _check(h: PauliSum, circuit: Circuit):
    if h.n_qubits != circuit.n_qubits:
        raise ValueError(f"Hamiltonian has {h.n_qubits} qubits, circuit {circuit.n_qubits}")


def vqe(
    h: PauliSum,
    circuit: Circuit,
    optimizer: OptimizerSpec | None = None,
    evaluator: Evaluator | None = None,
    theta0=None,
    reference=None,
    method: str = "vqe",
) -> SolveResult:
    """Minimize ``<psi(theta)|h|psi(theta)>`` over the circuit parameters.

    ``reference`` (a state or amplitude vector) enables the fidelity report.
    """
    _check(h, circuit)
    optimizer = optimizer or OptimizerSpec()
    evaluator = evaluator if evaluator is not None else Evaluator()
    start_groups, start_evals = evaluator.groups_executed, evaluator.evaluations

    opt = minimize(lambda th: evaluator(circuit, th, h), optimizer, _theta0(circuit, theta0))
    raw = float(evaluator(circuit, opt.theta, h))
    return SolveResult(
        method=method,
        final_theta=opt.theta,
        energy_trace=opt.trace,
        raw_energy=raw,
        corrected_energy=None,
        n_circuit_groups_executed=evaluator.groups_executed - start_groups,
        n_evaluations=evaluator.evaluations - start_evals,
        seed=optimizer.seed,
        iterations=opt.iterations,
        converged=opt.converged,
        initial_energy=opt.initial_value,
        fidelity_vs_reference=_fidelity(circuit, opt.theta, reference),
        extra={"stop": opt.message},
    )


def sharc_vqe(
    h: PauliSum,
    circuit: Circuit,
    config: SharcConfig | None = None,
    occupied=(),
    optimizer: OptimizerSpec | None = None,
    evaluator: Evaluator | None = None,
    theta0=None,
    reference=None,
    correction_grouping=Grouping.EASY_SINGLE_GROUP,
    setup: SharcSetup | None = None,
) -> SolveResult:
    """SHARC-VQE: optimize on the diagonal ``H_p^{ij}``, then correct.

    ``occupied`` lists the occupied spin orbitals that define the refinement
    string. In-loop energies are measured as one computational-basis group;
    the final correction is evaluated with ``correction_grouping`` (the easy
    terms in one group and every hard term on its own by default).
    """
    _check(h, circuit)
    config = config or SharcConfig()
    evaluator = evaluator if evaluator is not None else Evaluator()
    if setup is None:
        setup = prepare_sharc(h, circuit, config, occupied)
    inner = evaluator.derive(grouping=Grouping.EASY_SINGLE_GROUP)
    result = vqe(setup.h_refined_partial, circuit, optimizer, inner, theta0, method="sharc_vqe")

    final = evaluator.derive(grouping=correction_grouping, seed_offset=1)
    result.corrected_energy = float(setup.corrected(result.final_theta, circuit, final))
    result.fidelity_vs_reference = _fidelity(circuit, result.final_theta, reference)
    result.extra.update(
        i=config.i,
        j=config.j,
        cutoff=config.cutoff,
        delta=config.delta,
        partition=setup.report.counts,
        refined=setup.refined.to_dict(),
        correction_groups=final.groups_executed,
    )
    return result


# --------------------------------------------------------------------------
# VQD
# --------------------------------------------------------------------------

def deflation_weight(h: PauliSum, gamma="sum_squares") -> float:
    """Overlap penalty weight from the observable's coefficients.

    ``"sum_squares"`` is ``sum c_i**2``; ``"mean_squares"`` divides by the term
    count; a number is used as given. The offset is not a coefficient.
    """
    if isinstance(gamma, (int, float)):
        value = float(gamma)
    else:
        c2 = h.coefficients**2
        if gamma == "sum_squares":
            value = float(np.sum(c2))
        elif gamma == "mean_squares":
            value = float(np.mean(c2)) if len(c2) else 0.0
        else:
            raise ValueError(f"unknown gamma mode {gamma!r}")
    if not value > 0:
        raise ValueError("deflation weight must be positive")
    return value


@dataclass
class DeflationState:
    """States found so far and their penalty weights."""

    states: list[np.ndarray] = field(default_factory=list)
    weights: list[float] = field(default_factory=list)

    def add(self, amplitudes: np.ndarray, weight: float):
        if not weight > 0:
            raise ValueError("deflation weights must be positive")
        self.states.append(np.array(amplitudes, dtype=complex))
        self.weights.append(float(weight))

    def penalty(self, amplitudes: np.ndarray) -> float:
        return float(sum(w * abs(np.vdot(s, amplitudes)) ** 2
                         for s, w in zip(self.states, self.weights)))

    def __len__(self):
        return len(self.states)


def vqd(
    h: PauliSum,
    k_states: int,
    circuit: Circuit,
    optimizer: OptimizerSpec | None = None,
    evaluator: Evaluator | None = None,
    sharc: SharcConfig | None = None,
    occupied=(),
    gamma="sum_squares",
    restarts: int = 0,
    theta0=None,
    references=None,
    seed: int = 0,
) -> list[SolveResult]:
    """Variational quantum deflation for the ``k_states`` lowest states.

    State ``k`` minimizes ``<O> + sum_l gamma |<psi|psi_l>|^2`` with the
    observable ``O`` either ``h`` or, when ``sharc`` is given, the refined
    partial Hamiltonian; in the latter case each final energy is corrected.
    Overlaps are exact inner products. The ground state starts from
    ``theta0`` plus ``restarts`` points uniform in ``[-pi, pi]``; deflated
    states use ``restarts + 1`` random points. The candidate with the lowest
    final objective is kept.
    """
    if k_states < 1:
        raise ValueError("k_states must be >= 1")
    _check(h, circuit)
    optimizer = optimizer or OptimizerSpec()
    evaluator = evaluator if evaluator is not None else Evaluator()
    setup = prepare_sharc(h, circuit, sharc, occupied) if sharc is not None else None
    observable = setup.h_refined_partial if setup is not None else h
    inner = evaluator.derive(grouping=Grouping.EASY_SINGLE_GROUP) if setup else evaluator
    weight = deflation_weight(observable, gamma)
    deflation = DeflationState()
    rng = np.random.default_rng(seed)
    results = []

    for k in range(k_states):
        # the reference point maximizes the overlap with a found ground state,
        # so deflated states start from random points only
        starts = [_theta0(circuit, theta0)] if k == 0 else []
        n_random = restarts if k == 0 else restarts + 1
        starts += [rng.uniform(-np.pi, np.pi, circuit.n_parameters) for _ in range(n_random)]

        def objective(theta):
            e = inner(circuit, theta, observable)
            if len(deflation):
                e += deflation.penalty(bind(circuit, theta).amplitudes)
            return e

        best = None
        groups0, evals0 = inner.groups_executed, inner.evaluations
        for start in starts:
            opt = minimize(objective, optimizer, start)
            final = opt.trace[-1] if opt.trace else objective(opt.theta)
            if best is None or final < best[1]:
                best = (opt, final)
        opt, final_objective = best
        amps = bind(circuit, opt.theta).amplitudes
        raw = float(inner(circuit, opt.theta, observable))
        corrected = None
        if setup is not None:
            fin = evaluator.derive(grouping=Grouping.EASY_SINGLE_GROUP, seed_offset=1 + k)
            corrected = float(setup.corrected(opt.theta, circuit, fin))
        ref = None if references is None or k >= len(references) else references[k]
        results.append(SolveResult(
            method="sharc_vqd" if setup else "vqd",
            final_theta=opt.theta,
            energy_trace=opt.trace,
            raw_energy=raw,
            corrected_energy=corrected,
            n_circuit_groups_executed=inner.groups_executed - groups0,
            n_evaluations=inner.evaluations - evals0,
            seed=seed,
            iterations=opt.iterations,
            converged=opt.converged,
            initial_energy=opt.initial_value,
            fidelity_vs_reference=None if ref is None else fidelity(amps, ref),
            extra={"state": k, "gamma": weight, "objective": final_objective,
                   "penalty": deflation.penalty(amps)},
        ))
        deflation.add(amps, weight)
    return results


# --------------------------------------------------------------------------
# PHI-VQE
# --------------------------------------------------------------------------

def select_partial(h: PauliSum, k_target: float) -> PauliSum:
    """Easy terms plus the heaviest hard terms until ``k_ph >= k_target``."""
    if not 0 < k_target <= 1:
        raise ValueError("k_target must lie in (0, 1]")
    easy = [t.string for t in h.terms if is_easy(t.string)]
    hard = sorted((t for t in h.terms if not is_easy(t.string)),
                  key=lambda t: (-abs(t.coefficient), t.string.label))
    chosen = list(easy)
    for t in [None] + hard:
        if t is not None:
            chosen.append(t.string)
        partial = h.subset(chosen)
        if k_ph(partial, h) >= k_target - 1e-12:
            return partial
    return h.subset(chosen)


@dataclass
class PhiResult:
    stage1: SolveResult
    stage2: SolveResult
    k_ph: float
    partial: PauliSum

    def to_dict(self) -> dict:
        return {"k_ph": self.k_ph, "partial_terms": self.partial.render(),
                "stage1": self.stage1.to_dict(), "stage2": self.stage2.to_dict()}


def phi_vqe(
    h_full: PauliSum,
    partial,
    circuit: Circuit,
    optimizer: OptimizerSpec | None = None,
    evaluator: Evaluator | None = None,
    theta0=None,
    seed: int = 0,
    target_energy: float | None = None,
    tolerance: float = 1e-3,
    reference=None,
) -> PhiResult:
    """Partial-Hamiltonian-initialized VQE.

    ``partial`` is a sub-Hamiltonian of ``h_full`` or a k_PH target (float).
    Stage 1 starts from ``theta0`` (uniform in [-0.1, 0.1] when omitted);
    stage 2 minimizes ``h_full`` from the stage-1 optimum. With
    ``target_energy`` stage 2 records the iterations needed to get within
    ``tolerance`` of it.
    """
    if not isinstance(partial, PauliSum):
        partial = select_partial(h_full, float(partial))
    kph = k_ph(partial, h_full)
    partial = partial.with_offset(h_full.offset)
    evaluator = evaluator if evaluator is not None else Evaluator()
    start = random_theta(circuit, seed) if theta0 is None else theta0
    stage1 = vqe(partial, circuit, optimizer, evaluator, start, method="phi_stage1")
    stage2 = vqe(h_full, circuit, optimizer, evaluator, stage1.final_theta,
                 reference=reference, method="phi_stage2")
    for stage in (stage1, stage2):
        stage.seed = seed
        stage.extra["k_ph"] = kph
    if target_energy is not None:
        stage2.extra["iterations_to_target"] = iterations_to_reach(
            stage2.energy_trace, target_energy, tolerance, stage2.initial_energy
        )
    return PhiResult(stage1, stage2, kph, partial)
