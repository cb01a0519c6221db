"""Shuffled Frog Leaping over per-subcarrier power/modulation codes."""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass
from operator import attrgetter

import numpy as np

from . import _kernels
from .objective import ModeWeights, PlanEvaluator
from .radio import MOD_CODE_MAX, MOD_CODE_MIN, N_POWER_CODES, POWER_CODE_MAX, ChannelEnvironment
from .trace import Frog, GenerationRecord, RunTrace


class ConfigError(ValueError):
    """Invalid optimizer or experiment configuration."""


class JumpRule(enum.Enum):
    # step = r * |guide - worst|, always non-negative
    PAPER_ABSOLUTE = "paper"
    # step = r * (guide - worst), moves toward the guide
    SIGNED_CLASSIC = "classic"

    @classmethod
    def parse(cls, value) -> "JumpRule":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        aliases = {"paperabsolute": "paper", "paper_absolute": "paper", "absolute": "paper",
                   "signedclassic": "classic", "signed_classic": "classic", "signed": "classic"}
        try:
            return cls(aliases.get(key, key))
        except ValueError:
            raise ConfigError(f"jump_rule must be 'paper' or 'classic', got {value!r}") from None


def _is_int(x) -> bool:
    return isinstance(x, (int, np.integer)) and not isinstance(x, bool)


@dataclass(frozen=True)
class SflaConfig:
    """SFLA settings.

    ``local_iterations=None`` runs as many local iterations per memeplex as
    the memeplex holds frogs, so one generation makes about
    ``population_size`` improvement attempts.
    """

    population_size: int = 100
    memeplexes: int = 10
    local_iterations: int | None = None
    generations: int = 2000
    jump_rule: JumpRule = JumpRule.SIGNED_CLASSIC
    s_max: int | None = None
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "jump_rule", JumpRule.parse(self.jump_rule))
        for name, lo in (("population_size", 2), ("memeplexes", 1), ("generations", 0)):
            v = getattr(self, name)
            if not _is_int(v) or v < lo:
                raise ConfigError(f"{name} must be an integer >= {lo}, got {v!r}")
        li = self.local_iterations
        if li is not None and (not _is_int(li) or li < 1):
            raise ConfigError(f"local_iterations must be an integer >= 1 or None, got {li!r}")
        if self.memeplexes > self.population_size:
            raise ConfigError(
                f"memeplexes ({self.memeplexes}) must not exceed population_size ({self.population_size})"
            )
        if self.s_max is not None and (not _is_int(self.s_max) or self.s_max < 1):
            raise ConfigError(f"s_max must be a positive integer or None, got {self.s_max!r}")
        if not _is_int(self.seed):
            raise ConfigError(f"seed must be an integer, got {self.seed!r}")

    @property
    def iterations_per_memeplex(self) -> int:
        if self.local_iterations is not None:
            return self.local_iterations
        return -(-self.population_size // self.memeplexes)


def random_codes(rng: np.random.Generator, size) -> tuple[np.ndarray, np.ndarray]:
    """Uniform power codes in [0, 93] and modulation codes in [1, 11]."""
    power = rng.integers(0, N_POWER_CODES, size=size)
    modulation = rng.integers(MOD_CODE_MIN, MOD_CODE_MAX + 1, size=size)
    return power, modulation


_CODE_LO = np.array([0, MOD_CODE_MIN])[:, None]
_CODE_HI = np.array([POWER_CODE_MAX, MOD_CODE_MAX])[:, None]


def random_plans(rng: np.random.Generator, count: int, n: int) -> np.ndarray:
    """``count`` uniform plans as a ``(count, 2, n)`` code array."""
    return rng.integers(_CODE_LO, _CODE_HI + 1, size=(count, 2, n))


def random_frog(n: int, evaluator: PlanEvaluator, rng: np.random.Generator) -> Frog:
    X = random_plans(rng, 1, n)[0]
    return Frog(X[0], X[1], evaluator.score(X[0], X[1]))


def init_population(config: SflaConfig, evaluator: PlanEvaluator, rng: np.random.Generator) -> list[Frog]:
    """Uniform random population with cached fitness; same draws as :func:`run_sfla`."""
    X = random_plans(rng, config.population_size, evaluator.n)
    fit = evaluator.score_codes(X)
    return [Frog(X[i, 0], X[i, 1], float(fit[i])) for i in range(config.population_size)]


def sort_population(population: list[Frog]) -> list[Frog]:
    """Best first; equal fitness keeps insertion order."""
    return sorted(population, key=attrgetter("fitness"), reverse=True)


def partition(population: list[Frog], m: int) -> list[list[Frog]]:
    """Deal a best-first population into ``m`` memeplexes: rank k goes to k mod m."""
    if not _is_int(m) or m < 1:
        raise ConfigError(f"memeplex count must be a positive integer, got {m!r}")
    if m > len(population):
        raise ConfigError(f"cannot split {len(population)} frogs into {m} memeplexes")
    return [population[k::m] for k in range(m)]


def shuffle(memeplexes: list[list[Frog]]) -> list[Frog]:
    return [frog for mp in memeplexes for frog in mp]


def jump_codes(worst, guide, r, rule: JumpRule, s_max: int | None, lo: int, hi: int) -> np.ndarray:
    """One leap of integer codes ``worst`` driven by ``guide`` with draws ``r``.

    The fractional step is rounded half-up, optionally limited to
    ``[-s_max, s_max]``, and the result is clipped to ``[lo, hi]``.
    """
    worst = np.asarray(worst, dtype=np.int64)
    gap = np.asarray(guide, dtype=np.int64) - worst
    if rule is JumpRule.PAPER_ABSOLUTE:
        gap = np.abs(gap)
    raw = r * gap
    raw += 0.5
    step = np.floor(raw).astype(np.int64)
    if s_max is not None:
        step = np.minimum(np.maximum(step, -s_max), s_max)
    step += worst
    return np.minimum(np.maximum(step, lo), hi)


def jump(worst: Frog, guide: Frog, rng: np.random.Generator, config: SflaConfig) -> tuple[np.ndarray, np.ndarray]:
    """Candidate (power, modulation) codes for ``worst`` leaping relative to ``guide``.

    A separate r ~ U(0, 1) is drawn for every scalar parameter.
    """
    base, target = _stack([worst, guide])
    cand = np.empty_like(base)
    _, absolute, s_max = _search_args(config)
    _kernels.jump_into(cand, base, target, rng, absolute, s_max)
    return cand[0], cand[1]


def improve_memeplex(
    memeplex: list[Frog],
    global_best: Frog,
    evaluator: PlanEvaluator,
    rng: np.random.Generator,
    config: SflaConfig,
) -> list[Frog]:
    """Local search on one memeplex; returns a new list, input untouched.

    Each iteration the worst frog leaps toward the memeplex best, then toward
    the global best, and is otherwise replaced by a random frog. A candidate
    must be strictly fitter than the worst to be kept.
    """
    if not memeplex:
        raise ConfigError("memeplex must not be empty")
    X = _stack(memeplex)
    fit = np.array([f.fitness for f in memeplex], dtype=float)
    _kernels.improve(
        X, fit, np.arange(len(memeplex)), _stack([global_best])[0], rng, *_search_args(config), *evaluator.tables
    )
    return [Frog(X[i, 0], X[i, 1], float(fit[i])) for i in range(len(memeplex))]


def _search_args(config: SflaConfig) -> tuple:
    absolute = config.jump_rule is JumpRule.PAPER_ABSOLUTE
    return config.iterations_per_memeplex, absolute, config.s_max or 0


def _stack(frogs: list[Frog]) -> np.ndarray:
    return np.stack([np.stack([f.power, f.modulation]) for f in frogs]).astype(np.int64)


def _check_cache(X, fit, evaluator: PlanEvaluator) -> None:
    for i in range(fit.size):
        assert fit[i] == evaluator.score(X[i, 0], X[i, 1]), "stale fitness cache"


def run_sfla(config: SflaConfig, env: ChannelEnvironment, weights: ModeWeights, *, debug: bool = False) -> RunTrace:
    """Full optimization run; identical inputs give identical traces (timings aside).

    Record 0 describes the initial population, record g the population after
    g shuffle cycles. Fitness values in the trace are best-so-far.
    """
    t0 = time.perf_counter()
    rng = np.random.default_rng(config.seed)
    evaluator = PlanEvaluator(env, weights)
    X = random_plans(rng, config.population_size, env.n)
    fit = evaluator.score_codes(X)
    search = _search_args(config)

    trace = RunTrace()
    best: Frog | None = None
    best_breakdown = None
    for generation in range(config.generations + 1):
        order = np.argsort(-fit, kind="stable")
        X, fit = X[order], fit[order]
        if debug:
            _check_cache(X, fit, evaluator)
        if best is None or fit[0] > best.fitness:
            best = Frog(X[0, 0].copy(), X[0, 1].copy(), float(fit[0]))
            best_breakdown = evaluator.breakdown(best.power, best.modulation)
        trace.records.append(
            GenerationRecord(generation, best.fitness, best_breakdown, (time.perf_counter() - t0) * 1e3)
        )
        if generation == config.generations:
            break
        # memeplexes are index views into the sorted arrays; writing back is the shuffle
        _kernels.shuffle_cycle(X, fit, config.memeplexes, X[0].copy(), rng, *search, *evaluator.tables)

    trace.best = best
    return trace
