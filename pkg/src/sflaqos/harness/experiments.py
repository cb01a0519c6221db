"""Seeded experiment runners that emit flat result rows and CSV."""

from __future__ import annotations

import csv
import io
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import astuple, dataclass, fields
from functools import lru_cache

import numpy as np

from ..ga import GaConfig, run_ga
from ..objective import TransmissionMode, fitness, mode_weights
from ..radio import ChannelEnvironment, sample_environment
from ..sfla import SflaConfig, run_sfla
from ..trace import RunTrace
from .oracle import oracle_exhaustive
from .spec import ExperimentSpec

CSV_COLUMNS = (
    "experiment", "mode", "n", "F", "m", "generations", "seed", "generation",
    "fitness", "f_rate", "f_ber", "f_power", "elapsed_ms",
)

# separates the channel stream from the optimizer stream of the same seed
_ENV_STREAM = 0x5EED_C4A1


@dataclass(frozen=True)
class ResultRow:
    experiment: str
    mode: str
    n: int
    F: int
    m: int | None
    generations: int
    seed: int
    generation: int | str
    fitness: float
    f_rate: float
    f_ber: float
    f_power: float
    elapsed_ms: float

    def __post_init__(self):
        for name in ("fitness", "f_rate", "f_ber", "f_power"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise ValueError(f"{name}={v!r} outside [0, 1]")
        if not self.elapsed_ms >= 0:
            raise ValueError(f"elapsed_ms={self.elapsed_ms!r} must be >= 0")
        if self.generation != "final" and not isinstance(self.generation, int):
            raise ValueError(f"generation must be an int or 'final', got {self.generation!r}")

    def as_csv(self) -> list[str]:
        return ["" if v is None else (repr(v) if isinstance(v, float) else str(v)) for v in astuple(self)]

    @classmethod
    def from_csv(cls, record: dict[str, str]) -> "ResultRow":
        kinds = {f.name: f.type for f in fields(cls)}
        values = {}
        for name in CSV_COLUMNS:
            text = record[name]
            kind = kinds[name]
            if name == "m":
                values[name] = int(text) if text else None
            elif name == "generation":
                values[name] = text if text == "final" else int(text)
            elif kind == "int":
                values[name] = int(text)
            elif kind == "float":
                values[name] = float(text)
            else:
                values[name] = text
        return cls(**values)


def environment_for(n: int, seed: int) -> ChannelEnvironment:
    """The channel shared by every algorithm and mode in an ``(n, seed)`` cell."""
    return sample_environment(n, np.random.default_rng([_ENV_STREAM, seed, n]))


def _row(experiment, mode, n, F, m, generations, seed, generation, record, elapsed=None) -> ResultRow:
    b = record.breakdown
    return ResultRow(
        experiment, mode.value, n, F, m, generations, seed, generation,
        record.best_fitness, b.f_rate, b.f_ber, b.f_power,
        record.elapsed_ms if elapsed is None else elapsed,
    )


def _sfla(spec: ExperimentSpec, n: int, m: int, generations: int, mode: TransmissionMode, seed: int) -> RunTrace:
    config = SflaConfig(
        population_size=spec.population,
        memeplexes=m,
        local_iterations=spec.local_iterations,
        generations=generations,
        jump_rule=spec.jump_rule,
        seed=seed,
    )
    return run_sfla(config, environment_for(n, seed), mode_weights(mode))


@lru_cache(maxsize=None)
def warm_up() -> None:
    """Trigger kernel compilation so it never lands inside a timed run."""
    run_sfla(SflaConfig(4, 2, generations=1, seed=0), sample_environment(2, 0), mode_weights("multimedia"))
    run_ga(GaConfig(4, 1, seed=0), sample_environment(2, 0), mode_weights("multimedia"))


# --- cells -------------------------------------------------------------------
# A cell is one (mode, n, m, seed) combination; it runs the longest requested
# budget once and reads shorter budgets off the trace, which is exact because
# a run's first g generations do not depend on how many follow.


def _cell_convergence(spec, mode, n, m, seed):
    rows = []
    for g in spec.generations:
        trace = _sfla(spec, n, m, g, mode, seed)
        for rec in trace.records:
            rows.append(_row(spec.experiment, mode, n, spec.population, m, g, seed, rec.generation, rec))
        rows.append(_row(spec.experiment, mode, n, spec.population, m, g, seed, "final", trace.final))
    return rows


def _cell_final(spec, mode, n, m, seed):
    trace = _sfla(spec, n, m, max(spec.generations), mode, seed)
    return [
        _row(spec.experiment, mode, n, spec.population, m, g, seed, "final", trace.records[g])
        for g in spec.generations
    ]


def _cell_timing(spec, mode, n, m, seed):
    rows = []
    for g in spec.generations:
        trace = _sfla(spec, n, m, g, mode, seed)
        rows.append(_row(spec.experiment, mode, n, spec.population, m, g, seed, "final", trace.final))
    return rows


def _cell_versus(spec, mode, n, m, seed):
    g_max = max(spec.generations)
    sfla = _sfla(spec, n, m, g_max, mode, seed)
    ga = run_ga(
        GaConfig(population_size=spec.population, generations=g_max, seed=seed),
        environment_for(n, seed),
        mode_weights(mode),
    )
    rows = []
    for g in spec.generations:
        rows.append(_row(f"{spec.experiment}/sfla", mode, n, spec.population, m, g, seed, "final", sfla.records[g]))
        rows.append(_row(f"{spec.experiment}/ga", mode, n, spec.population, None, g, seed, "final", ga.records[g]))
    return rows


def _cell_oracle(spec, mode, n, m, seed):
    env = environment_for(n, seed)
    weights = mode_weights(mode)
    g_max = max(spec.generations)
    trace = _sfla(spec, n, m, g_max, mode, seed)
    rows = [
        _row(f"{spec.experiment}/sfla", mode, n, spec.population, m, g, seed, "final", trace.records[g])
        for g in spec.generations
    ]
    t0 = time.perf_counter()
    plan, _ = oracle_exhaustive(env, weights, allow_pairs=n == 2)
    elapsed = (time.perf_counter() - t0) * 1e3
    b = fitness(plan, env, weights)
    rows.append(
        ResultRow(f"{spec.experiment}/oracle", mode.value, n, spec.population, None, 0, seed, "final",
                  b.fitness, b.f_rate, b.f_ber, b.f_power, elapsed)
    )
    return rows


_CELLS = {
    "convergence": _cell_convergence,
    "subcarrier_sweep": _cell_final,
    "memeplex_sweep": _cell_final,
    "timing": _cell_timing,
    "sfla_vs_ga": _cell_versus,
    "oracle_check": _cell_oracle,
}


def _cells(spec: ExperimentSpec):
    for n in spec.n:
        for mode in spec.modes:
            for m in spec.memeplexes:
                for seed in spec.seeds:
                    yield spec, mode, n, m, seed


def _run_cell(args):
    spec, mode, n, m, seed = args
    warm_up()
    return _CELLS[spec.experiment](spec, mode, n, m, seed)


def run_experiment(spec: ExperimentSpec, workers: int = 1) -> list[ResultRow]:
    """Run every cell of ``spec`` and return rows in a fixed order.

    ``workers > 1`` spreads cells over processes; row order and every
    non-timing value are unchanged. Keep ``workers=1`` for timing runs.
    """
    warm_up()
    cells = list(_cells(spec))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_run_cell, cells))
    else:
        chunks = [_run_cell(c) for c in cells]
    return [row for chunk in chunks for row in chunk]


def run_convergence(spec: ExperimentSpec, workers: int = 1) -> list[ResultRow]:
    return run_experiment(spec.replace(experiment="convergence"), workers)


def run_subcarrier_sweep(spec: ExperimentSpec, workers: int = 1) -> list[ResultRow]:
    return run_experiment(spec.replace(experiment="subcarrier_sweep"), workers)


def run_memeplex_sweep(spec: ExperimentSpec, workers: int = 1) -> list[ResultRow]:
    return run_experiment(spec.replace(experiment="memeplex_sweep"), workers)


def run_timing(spec: ExperimentSpec) -> list[ResultRow]:
    return run_experiment(spec.replace(experiment="timing"), workers=1)


def run_sfla_vs_ga(spec: ExperimentSpec, workers: int = 1) -> list[ResultRow]:
    return run_experiment(spec.replace(experiment="sfla_vs_ga"), workers)


def run_oracle_check(spec: ExperimentSpec, workers: int = 1) -> list[ResultRow]:
    return run_experiment(spec.replace(experiment="oracle_check"), workers)


# --- CSV -----------------------------------------------------------------------


def write_csv(rows: list[ResultRow], stream) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow(row.as_csv())


def to_csv(rows: list[ResultRow]) -> str:
    buf = io.StringIO()
    write_csv(rows, buf)
    return buf.getvalue()


def save_csv(rows: list[ResultRow], path) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            write_csv(rows, fh)
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write results to {path}: {exc.strerror}") from exc


def read_csv(stream) -> list[ResultRow]:
    reader = csv.DictReader(stream)
    if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
        raise ValueError(f"unexpected CSV header {reader.fieldnames!r}")
    return [ResultRow.from_csv(rec) for rec in reader]


def final_fitness(rows: list[ResultRow], experiment: str | None = None) -> dict[tuple, list[float]]:
    """Group final-row fitness by (experiment, mode, n, m, generations) across seeds."""
    out: dict[tuple, list[float]] = {}
    for r in rows:
        if r.generation != "final" or (experiment is not None and r.experiment != experiment):
            continue
        out.setdefault((r.experiment, r.mode, r.n, r.m, r.generations), []).append(r.fitness)
    return out


def median(values) -> float:
    return float(np.median(values)) if len(values) else math.nan
