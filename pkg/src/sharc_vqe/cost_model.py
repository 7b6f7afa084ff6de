"""Shot-cost scaling laws and mean-squared-error curves.

Closed forms carry unit prefactors: only ratios and orderings between
strategies are meaningful. Ranges such as ``N**5 .. N**6`` are kept as
``(low, high)`` pairs.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .pauli import PauliSum
from .statevector import Grouping, ShotPlan, analytic_mse, expectation_exact, expectation_sampled, QuantumState

STRATEGIES = ("ungrouped", "grouped", "sharc", "sharc_plus")

# (low, high) total shots times eps**2 for a VQE run on N qubits
_LAWS: dict[str, tuple[Callable[[float], float], Callable[[float], float]]] = {
    "ungrouped": (lambda n: n**7, lambda n: n**7),
    "grouped": (lambda n: n**5, lambda n: n**6),
    "sharc": (lambda n: n**3 + 2 * n**4, lambda n: n**3 + 2 * n**4),
    "sharc_plus": (lambda n: n**3 + 2 * n**2, lambda n: n**3 + 2 * n**3),
}


@dataclass
class CostModelReport:
    epsilon: float
    n_qubits: list[int]
    strategies: tuple[str, ...]
    totals: dict[str, list[tuple[float, float]]] = field(default_factory=dict)

    def ordering_holds(self) -> list[bool]:
        """Per N: every listed strategy beats the next one even in its worst case.

        Strategies are compared in the canonical order sharc_plus < sharc <
        grouped < ungrouped, restricted to those present.
        """
        order = [s for s in reversed(STRATEGIES) if s in self.strategies]
        out = []
        for k in range(len(self.n_qubits)):
            out.append(all(
                self.totals[better][k][1] < self.totals[worse][k][0]
                for better, worse in zip(order, order[1:])
            ))
        return out

    def rows(self) -> list[dict]:
        rows = []
        for k, n in enumerate(self.n_qubits):
            row = {"n_qubits": n}
            for s in self.strategies:
                lo, hi = self.totals[s][k]
                row[f"{s}_low"], row[f"{s}_high"] = lo, hi
            rows.append(row)
        return rows

    def to_dict(self) -> dict:
        return {"epsilon": self.epsilon, "strategies": list(self.strategies),
                "rows": self.rows(), "ordering_holds": self.ordering_holds()}


def shot_totals(n_qubits: Sequence[int], epsilon: float,
                strategies: Sequence[str] = STRATEGIES) -> CostModelReport:
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    unknown = set(strategies) - set(STRATEGIES)
    if unknown:
        raise ValueError(f"unknown strategies {sorted(unknown)}")
    ns = [int(n) for n in n_qubits]
    if any(n < 1 for n in ns):
        raise ValueError("qubit counts must be positive")
    report = CostModelReport(float(epsilon), ns, tuple(strategies))
    scale = 1.0 / epsilon**2
    for s in strategies:
        lo, hi = _LAWS[s]
        report.totals[s] = [(lo(float(n)) * scale, hi(float(n)) * scale) for n in ns]
    return report


@dataclass
class MseRow:
    shots: int
    empirical: float
    analytic: float


def mse_curve(
    h: PauliSum,
    state,
    shots: Sequence[int],
    seeds: Sequence[int],
) -> list[MseRow]:
    """Empirical MSE of ungrouped sampled energies against the closed form.

    Each shot count is sampled once per seed (noise-free); the analytic column
    is ``sum_i c_i**2 (1 - <P_i>**2) / S``.
    """
    if not isinstance(state, QuantumState):
        state = QuantumState(h.n_qubits, state)
    if any(s < 1 for s in shots):
        raise ValueError("shot counts must be >= 1")
    exact = expectation_exact(state, h)
    rows = []
    for s in shots:
        plan = ShotPlan(int(s), Grouping.UNGROUPED)
        errs = [(expectation_sampled(state, h, plan, None, seed)[0] - exact) ** 2 for seed in seeds]
        rows.append(MseRow(int(s), float(np.mean(errs)), float(analytic_mse(h, state.amplitudes, s))))
    return rows


def loglog_slope(x, y) -> float:
    """Least-squares slope of ``log y`` against ``log x``."""
    return float(np.polyfit(np.log(np.asarray(x, float)), np.log(np.asarray(y, float)), 1)[0])
