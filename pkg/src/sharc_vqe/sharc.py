"""Hamiltonian partitioning, refined-operator fitting and the subtractive correction.

The Hamiltonian is split four ways by execution cost (I/Z-only strings are
*easy*) and by coefficient magnitude against a cutoff ``c0``. The easy part
forms the partial Hamiltonian ``H_p``; the hard part ``H_d`` is replaced during
optimization by a diagonal surrogate fitted near the reference state, and its
true expectation is restored at the end.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .ansatz import Circuit, bind
from .pauli import PauliString, PauliSum, PauliTerm, is_easy
from .statevector import expectation_exact, pauli_expectations

DEGENERATE_DENOMINATOR = 1e-8
DEFAULT_SIGNIFICANCE = 1e-3  # 1 mHa

Evaluator = Callable[[Circuit, np.ndarray, PauliSum], float]


class RefinementError(ValueError):
    """The refined-operator fit is ill-posed for the chosen strings."""


class SignificanceWarning(UserWarning):
    """A hard term contributes more than the trusted threshold near the reference."""


def exact_evaluator(circuit: Circuit, theta, h: PauliSum) -> float:
    return expectation_exact(bind(circuit, theta), h)


@dataclass(frozen=True)
class PartitionReport:
    h_es: PauliSum
    h_ei: PauliSum
    h_ds: PauliSum
    h_di: PauliSum
    cutoff: float

    @property
    def counts(self) -> dict[str, int]:
        return {"es": len(self.h_es), "ei": len(self.h_ei), "ds": len(self.h_ds), "di": len(self.h_di)}

    @property
    def h_p(self) -> PauliSum:
        return self.h_es + self.h_ei

    @property
    def h_d(self) -> PauliSum:
        return self.h_ds + self.h_di

    def total(self) -> PauliSum:
        return self.h_es + self.h_ei + self.h_ds + self.h_di

    def to_dict(self) -> dict:
        return {
            "cutoff": self.cutoff,
            "counts": self.counts,
            "offset": self.h_es.offset,
            "blocks": {name: getattr(self, f"h_{name}").render() for name in ("es", "ei", "ds", "di")},
        }


def partition(h: PauliSum, c0: float) -> PartitionReport:
    """Split ``h`` into significant/insignificant x easy/hard blocks.

    ``|c| >= c0`` is significant. The identity string is an ordinary easy term;
    the constant offset rides with the significant easy block.
    """
    if not c0 > 0:
        raise ValueError("cutoff c0 must be positive")
    blocks = {"es": [], "ei": [], "ds": [], "di": []}
    for t in h.terms:
        key = ("e" if is_easy(t.string) else "d") + ("s" if abs(t.coefficient) >= c0 else "i")
        blocks[key].append(t)
    n = h.n_qubits
    return PartitionReport(
        h_es=PauliSum(n, tuple(blocks["es"]), h.offset),
        h_ei=PauliSum(n, tuple(blocks["ei"])),
        h_ds=PauliSum(n, tuple(blocks["ds"])),
        h_di=PauliSum(n, tuple(blocks["di"])),
        cutoff=c0,
    )


def occupation_string(occupied, n_qubits: int) -> PauliString:
    """Z wherever the occupation pattern, written left to right, has an electron.

    Orbital ``k`` lands on label position ``k``; for the H2 reference ``{0, 2}``
    this gives ``ZIZI``.
    """
    chars = ["I"] * n_qubits
    for k in occupied:
        if not 0 <= k < n_qubits:
            raise ValueError(f"orbital {k} out of range for {n_qubits} qubits")
        chars[k] = "Z"
    return PauliString("".join(chars))


def select_refinement_strings(h: PauliSum | None, occupied, i: int = 1,
                              n_qubits: int | None = None) -> list[PauliString]:
    """Diagonal strings for the refined operator.

    The first is the occupation string; further ones are the heaviest easy
    non-identity strings of ``h`` not yet chosen.
    """
    if i < 1:
        raise ValueError("need at least one refinement string")
    if n_qubits is None:
        if h is None:
            raise ValueError("n_qubits is required without a Hamiltonian")
        n_qubits = h.n_qubits
    chosen = [occupation_string(occupied, n_qubits)]
    if i == 1:
        return chosen
    if h is None:
        raise ValueError("choosing more than one string needs the Hamiltonian")
    pool = sorted(
        (t for t in h.terms if is_easy(t.string) and t.string.weight > 0 and t.string not in chosen),
        key=lambda t: (-abs(t.coefficient), t.string.label),
    )
    if len(pool) < i - 1:
        raise ValueError(f"only {len(pool) + 1} easy strings available, {i} requested")
    return chosen + [t.string for t in pool[: i - 1]]


@dataclass(frozen=True)
class FitPoint:
    step: int
    theta: tuple[float, ...]
    h_d: float
    strings: tuple[float, ...]


@dataclass(frozen=True)
class RefinedOperator:
    """Diagonal surrogate ``sum_k c_k P_k`` for the hard part of the Hamiltonian."""

    n_qubits: int
    strings: tuple[PauliString, ...]
    coefficients: tuple[float, ...]
    j: int
    delta: float
    fit_points: tuple[FitPoint, ...] = ()
    max_hard_contribution: float = 0.0

    def __post_init__(self):
        if not all(is_easy(s) for s in self.strings):
            raise ValueError("refined strings must be I/Z only")

    @property
    def i(self) -> int:
        return len(self.strings)

    @classmethod
    def empty(cls, n_qubits: int) -> "RefinedOperator":
        """The no-surrogate case (correction applied only at the end)."""
        return cls(n_qubits, (), (), 0, 0.0)

    def as_sum(self) -> PauliSum:
        return PauliSum(
            self.n_qubits,
            tuple(PauliTerm(float(c), s) for s, c in zip(self.strings, self.coefficients)),
        )

    def residuals(self) -> list[float]:
        """``<H_d> - <H'_d>`` at every fit point."""
        return [
            p.h_d - float(np.dot(self.coefficients, p.strings)) for p in self.fit_points
        ]

    def to_dict(self) -> dict:
        return {
            "i": self.i,
            "j": self.j,
            "delta": self.delta,
            "terms": self.as_sum().render(),
            "max_hard_contribution": self.max_hard_contribution,
            "fit_points": [
                {"step": p.step, "theta": list(p.theta), "h_d": p.h_d, "strings": list(p.strings)}
                for p in self.fit_points
            ],
        }


def fit_refined_operator(
    h_d: PauliSum,
    circuit: Circuit,
    strings: Sequence[PauliString],
    j: int,
    delta: float = 0.1,
    theta_ref=None,
    significance: float = DEFAULT_SIGNIFICANCE,
) -> RefinedOperator:
    """Fit surrogate coefficients at ``theta_ref + k * delta`` for ``k = 1..j``.

    With one string the coefficient is the mean over points of
    ``<H_d> / <P_1>``; with several strings the ``j`` point equations are
    solved in the least-squares sense. ``theta_ref`` defaults to zeros, the
    reference determinant of the circuit.
    """
    if j < 1:
        raise ValueError("j must be >= 1")
    if delta == 0:
        raise ValueError("delta must be nonzero")
    strings = tuple(strings)
    if not strings:
        raise ValueError("need at least one refinement string")
    n = circuit.n_qubits
    theta_ref = np.zeros(circuit.n_parameters) if theta_ref is None else np.asarray(theta_ref, float)
    probe = PauliSum(n, tuple(PauliTerm(1.0, s) for s in strings))
    # keep the probe order aligned with ``strings`` even after canonical merging
    order = [probe.strings.index(s) for s in strings]

    points, rows, rhs = [], [], []
    worst = 0.0
    for k in range(1, j + 1):
        theta = theta_ref + k * delta
        amps = bind(circuit, theta).amplitudes
        hd_val = expectation_exact(amps, h_d) if len(h_d) or h_d.offset else 0.0
        p_vals = pauli_expectations(amps, probe)[order]
        if len(h_d):
            worst = max(worst, float(np.max(np.abs(h_d.coefficients * pauli_expectations(amps, h_d)))))
        points.append(FitPoint(k, tuple(theta.tolist()), float(hd_val), tuple(p_vals.tolist())))
        rows.append(p_vals)
        rhs.append(hd_val)

    rows = np.array(rows)
    rhs = np.array(rhs)
    if len(strings) == 1:
        denom = rows[:, 0]
        if np.any(np.abs(denom) < DEGENERATE_DENOMINATOR):
            raise RefinementError(
                f"<{strings[0].label}> vanishes at a fit point; choose another string"
            )
        coefficients = (float(np.mean(rhs / denom)),)
    else:
        if np.linalg.matrix_rank(rows) < min(rows.shape):
            raise RefinementError("refinement strings are linearly dependent at the fit points")
        coefficients = tuple(float(c) for c in np.linalg.lstsq(rows, rhs, rcond=None)[0])

    if worst > significance:
        warnings.warn(
            f"a hard term contributes {worst:.3g} Ha near the reference (> {significance:.3g}); "
            "the surrogate may be unreliable, consider partial-Hamiltonian initialization",
            SignificanceWarning,
            stacklevel=2,
        )
    return RefinedOperator(n, strings, coefficients, j, float(delta), tuple(points), worst)


def assemble_refined_partial(report: PartitionReport, refined: RefinedOperator) -> PauliSum:
    """``H_p + H'_d``: every string is diagonal, so one circuit measures it."""
    if refined.n_qubits != report.h_es.n_qubits:
        raise ValueError("qubit counts differ")
    return report.h_p + refined.as_sum()


def correction_operator(h_refined_partial: PauliSum, refined: RefinedOperator, h_d: PauliSum) -> PauliSum:
    """``H_p^{ij} - H'_d + H_d`` as one canonical sum."""
    return h_refined_partial - refined.as_sum() + h_d


def corrected_energy(
    theta,
    circuit: Circuit,
    h_refined_partial: PauliSum,
    refined: RefinedOperator,
    h_d: PauliSum,
    evaluator: Evaluator = exact_evaluator,
) -> float:
    """Energy with the surrogate's contribution swapped for the true hard part."""
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (circuit.n_parameters,):
        raise ValueError(f"expected {circuit.n_parameters} parameters")
    return float(evaluator(circuit, theta, correction_operator(h_refined_partial, refined, h_d)))


def k_ph(partial: PauliSum, full: PauliSum) -> float:
    """Summed |coefficients| of ``partial`` relative to ``full`` (offsets excluded)."""
    missing = [s.label for s in partial.strings if s not in full]
    if missing:
        raise ValueError(f"partial strings not in the full Hamiltonian: {missing}")
    denom = float(np.sum(np.abs(full.coefficients)))
    if denom == 0:
        raise ValueError("full Hamiltonian has no terms")
    return float(np.sum(np.abs(partial.coefficients))) / denom


@dataclass
class SharcConfig:
    cutoff: float = 0.01
    i: int = 1
    j: int = 1
    delta: float = 0.1
    occupied: tuple[int, ...] | None = None
    significance: float = DEFAULT_SIGNIFICANCE

    def __post_init__(self):
        if self.i < 0 or self.j < 0:
            raise ValueError("i and j must be >= 0")
        if (self.i == 0) != (self.j == 0):
            raise ValueError("i and j are both zero (no surrogate) or both positive")


@dataclass
class SharcSetup:
    """Everything derived from a Hamiltonian before optimization starts."""

    report: PartitionReport
    refined: RefinedOperator
    h_refined_partial: PauliSum
    config: SharcConfig = field(repr=False)

    @property
    def h_d(self) -> PauliSum:
        return self.report.h_d

    def corrected(self, theta, circuit: Circuit, evaluator: Evaluator = exact_evaluator) -> float:
        return corrected_energy(theta, circuit, self.h_refined_partial, self.refined, self.h_d, evaluator)


def prepare_sharc(h: PauliSum, circuit: Circuit, config: SharcConfig, occupied) -> SharcSetup:
    report = partition(h, config.cutoff)
    if config.i == 0 or not len(report.h_d):
        refined = RefinedOperator.empty(h.n_qubits)
    else:
        occ = config.occupied if config.occupied is not None else occupied
        strings = select_refinement_strings(h, occ, config.i)
        refined = fit_refined_operator(
            report.h_d, circuit, strings, config.j, config.delta, significance=config.significance
        )
    return SharcSetup(report, refined, assemble_refined_partial(report, refined), config)
