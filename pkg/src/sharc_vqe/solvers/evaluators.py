"""Energy evaluators with a measurement-group counter.

An evaluator turns ``(circuit, theta, h)`` into an energy. Every call counts
the circuit groups that a device would execute for ``h`` under the evaluator's
grouping, whether or not the value itself is sampled.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from ..ansatz import Circuit, TrajectorySampler, bind
from ..pauli import PauliSum
from ..statevector import (
    Grouping,
    NoiseSpec,
    ShotPlan,
    estimate_energy,
    expectation_exact,
    measurement_groups,
    sample_group_expectations,
)


@dataclass
class Evaluator:
    """Exact or shot-sampled energy of a bound circuit.

    ``mode="exact"`` ignores ``plan.shots_per_group`` and ``noise`` but still
    counts groups according to ``plan.grouping``.
    """

    mode: str = "exact"
    plan: ShotPlan = field(default_factory=ShotPlan)
    noise: NoiseSpec | None = None
    seed: int = 0
    groups_executed: int = field(default=0, init=False)
    evaluations: int = field(default=0, init=False)

    def __post_init__(self):
        if self.mode not in ("exact", "sampled"):
            raise ValueError(f"unknown evaluator mode {self.mode!r}")
        if self.noise is not None and self.mode == "exact":
            raise ValueError("noise needs the sampled evaluator")
        noise_seed = 0 if self.noise is None else self.noise.seed
        self._rng = np.random.default_rng(np.random.SeedSequence([self.seed, noise_seed]))
        self._groups: dict[int, tuple[PauliSum, list]] = {}

    @classmethod
    def exact(cls, grouping=Grouping.UNGROUPED) -> "Evaluator":
        return cls("exact", ShotPlan(grouping=grouping))

    @classmethod
    def sampled(cls, shots: int = 8192, grouping=Grouping.UNGROUPED,
                noise: NoiseSpec | None = None, seed: int = 0) -> "Evaluator":
        return cls("sampled", ShotPlan(shots, grouping), noise, seed)

    @property
    def is_exact(self) -> bool:
        return self.mode == "exact"

    def derive(self, grouping=None, seed_offset: int = 0) -> "Evaluator":
        """Fresh evaluator (own counters and stream) sharing this configuration."""
        plan = self.plan if grouping is None else replace(self.plan, grouping=Grouping(grouping))
        return Evaluator(self.mode, plan, self.noise, self.seed + seed_offset)

    def groups_for(self, h: PauliSum) -> list:
        cached = self._groups.get(id(h))
        if cached is None or cached[0] is not h:
            cached = (h, measurement_groups(h, self.plan.grouping))
            self._groups[id(h)] = cached
        return cached[1]

    def __call__(self, circuit: Circuit, theta, h: PauliSum) -> float:
        groups = self.groups_for(h)
        self.groups_executed += len(groups)
        self.evaluations += 1
        if self.is_exact:
            return expectation_exact(bind(circuit, theta), h)
        if self.noise is None:
            amps = bind(circuit, theta).amplitudes
            source = lambda _rng: [amps]  # noqa: E731
        else:
            sampler = TrajectorySampler(circuit, theta, self.noise)
            source = sampler.trajectories
        est = sample_group_expectations(
            source, h, groups, self.plan.shots_per_group, self.noise, self._rng
        )
        return estimate_energy(h, est, self.plan.shots_per_group)[0]

    def to_dict(self) -> dict:
        out = {"mode": self.mode, "grouping": self.plan.grouping.value, "seed": self.seed}
        if not self.is_exact:
            out["shots_per_group"] = self.plan.shots_per_group
        if self.noise is not None:
            n = self.noise
            out["noise"] = {"p1": n.p1, "p2": n.p2, "readout_flip": n.readout_flip,
                            "seed": n.seed, "trajectories": n.trajectories}
        return out
