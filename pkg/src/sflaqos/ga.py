"""Generational genetic algorithm over the same plan encoding, used as a baseline."""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .objective import ModeWeights, PlanEvaluator
from .radio import MOD_CODE_MAX, MOD_CODE_MIN, POWER_CODE_MAX, ChannelEnvironment
from .sfla import ConfigError, _is_int, random_codes
from .trace import Frog, GenerationRecord, RunTrace


@dataclass(frozen=True)
class GaConfig:
    """GA settings. ``mutation_rate_per_gene=None`` means 1 / (2n)."""

    population_size: int = 100
    generations: int = 2000
    tournament_size: int = 3
    crossover_rate: float = 0.9
    mutation_rate_per_gene: float | None = None
    elitism_count: int = 1
    seed: int = 0

    def __post_init__(self):
        for name, lo in (("population_size", 2), ("generations", 0), ("tournament_size", 2), ("elitism_count", 0)):
            v = getattr(self, name)
            if not _is_int(v) or v < lo:
                raise ConfigError(f"{name} must be an integer >= {lo}, got {v!r}")
        if self.elitism_count >= self.population_size:
            raise ConfigError("elitism_count must be smaller than population_size")
        if not 0.0 <= self.crossover_rate <= 1.0:
            raise ConfigError(f"crossover_rate must lie in [0, 1], got {self.crossover_rate!r}")
        rate = self.mutation_rate_per_gene
        if rate is not None and not 0.0 <= rate <= 1.0:
            raise ConfigError(f"mutation_rate_per_gene must lie in [0, 1], got {rate!r}")
        if not _is_int(self.seed):
            raise ConfigError(f"seed must be an integer, got {self.seed!r}")

    def mutation_rate(self, n: int) -> float:
        return 1.0 / (2 * n) if self.mutation_rate_per_gene is None else self.mutation_rate_per_gene


def to_genes(power: np.ndarray, modulation: np.ndarray) -> np.ndarray:
    """Interleave codes as p0, m0, p1, m1, ... along the last axis."""
    genes = np.empty(power.shape[:-1] + (2 * power.shape[-1],), dtype=np.int64)
    genes[..., 0::2] = power
    genes[..., 1::2] = modulation
    return genes


def from_genes(genes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    return genes[..., 0::2], genes[..., 1::2]


def gene_bounds(n: int) -> tuple[np.ndarray, np.ndarray]:
    lo = np.tile([0, MOD_CODE_MIN], n)
    hi = np.tile([POWER_CODE_MAX, MOD_CODE_MAX], n)
    return lo, hi


def tournament_select(fit: np.ndarray, k: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Indices of ``count`` winners; each tournament draws ``k`` entrants with replacement."""
    entrants = rng.integers(0, fit.size, size=(count, k))
    return entrants[np.arange(count), np.argmax(fit[entrants], axis=1)]


def single_point_crossover(a: np.ndarray, b: np.ndarray, rate: float, rng: np.random.Generator):
    """Row-wise single-point crossover of parent stacks ``a`` and ``b``."""
    pairs, length = a.shape
    do = rng.random(pairs) < rate
    # cut in [1, length - 1]; length 1 genomes cannot be cut
    cut = rng.integers(1, max(length, 2), size=pairs)
    cols = np.arange(length)[None, :]
    swap = do[:, None] & (cols >= cut[:, None])
    return np.where(swap, b, a), np.where(swap, a, b)


def mutate(genes: np.ndarray, rate: float, rng: np.random.Generator) -> np.ndarray:
    """Reset each gene with probability ``rate`` to a uniform value within its codebook.

    Draws the binomial number of mutated genes and then their distinct
    positions, which has the same law as one Bernoulli trial per gene.
    """
    rows, length = genes.shape
    lo, hi = gene_bounds(length // 2)
    count = rng.binomial(rows * length, rate)
    flat = rng.choice(rows * length, size=count, replace=False)
    cols = flat % length
    out = genes.copy()
    out[flat // length, cols] = rng.integers(lo[cols], hi[cols] + 1)
    return out


def run_ga(config: GaConfig, env: ChannelEnvironment, weights: ModeWeights) -> RunTrace:
    """Elitist generational GA; returns a trace with the same layout as SFLA's."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(config.seed)
    evaluator = PlanEvaluator(env, weights)
    n, size = env.n, config.population_size
    genes = to_genes(*random_codes(rng, (size, n)))
    fit = evaluator.score(*from_genes(genes))
    rate = config.mutation_rate(n)
    n_children = size - config.elitism_count
    n_pairs = (n_children + 1) // 2

    trace = RunTrace()
    best = None
    best_breakdown = None
    for generation in range(config.generations + 1):
        order = np.argsort(-fit, kind="stable")
        lead = order[0]
        if best is None or fit[lead] > best.fitness:
            p, m = from_genes(genes[lead])
            best = Frog(p.copy(), m.copy(), float(fit[lead]))
            best_breakdown = evaluator.breakdown(best.power, best.modulation)
        trace.records.append(
            GenerationRecord(generation, best.fitness, best_breakdown, (time.perf_counter() - t0) * 1e3)
        )
        if generation == config.generations:
            break
        elite = genes[order[: config.elitism_count]]
        parents = tournament_select(fit, config.tournament_size, 2 * n_pairs, rng)
        a, b = single_point_crossover(genes[parents[0::2]], genes[parents[1::2]], config.crossover_rate, rng)
        children = mutate(np.concatenate([a, b])[:n_children], rate, rng)
        genes = np.concatenate([elite, children])
        fit = evaluator.score(*from_genes(genes))

    trace.best = best
    return trace
