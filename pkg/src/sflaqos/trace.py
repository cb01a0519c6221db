"""Per-generation record of an optimizer run, shared by SFLA and the GA."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .objective import ObjectiveBreakdown
from .radio import TransmissionPlan


@dataclass(frozen=True, eq=False)
class Frog:
    """A candidate plan as raw code arrays plus its cached fitness."""

    power: np.ndarray
    modulation: np.ndarray
    fitness: float

    @classmethod
    def from_plan(cls, plan: TransmissionPlan, fitness: float) -> "Frog":
        return cls(plan.power, plan.modulation, float(fitness))

    @property
    def plan(self) -> TransmissionPlan:
        return TransmissionPlan(self.power, self.modulation)

    @property
    def n(self) -> int:
        return int(self.power.size)


@dataclass(frozen=True)
class GenerationRecord:
    generation: int
    best_fitness: float
    breakdown: ObjectiveBreakdown
    elapsed_ms: float


@dataclass
class RunTrace:
    records: list[GenerationRecord] = field(default_factory=list)
    best: Frog | None = None

    @property
    def best_fitness(self) -> np.ndarray:
        return np.array([r.best_fitness for r in self.records])

    @property
    def initial(self) -> GenerationRecord:
        return self.records[0]

    @property
    def final(self) -> GenerationRecord:
        return self.records[-1]

    @property
    def elapsed_ms(self) -> float:
        return self.records[-1].elapsed_ms if self.records else 0.0

    def fitness_signature(self) -> list[tuple]:
        """Everything in the trace except wall-clock timings."""
        sig = [(r.generation, r.best_fitness, r.breakdown) for r in self.records]
        if self.best is not None:
            sig.append((self.best.power.tolist(), self.best.modulation.tolist(), self.best.fitness))
        return sig
