"""scikit-learn style wrappers around the optimizers.

The "data" is the per-subcarrier attenuation vector in dB. ``fit`` searches
for a plan on that channel; ``predict`` returns the plan as an ``(n, 2)``
array of (power code, modulation code) rows and ``score`` evaluates the
fitted plan on a channel of the same width.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .ga import GaConfig, run_ga
from .harness.oracle import oracle_exhaustive
from .objective import PlanEvaluator, fitness, mode_weights
from .radio import ChannelEnvironment, DomainError, TransmissionPlan
from .sfla import SflaConfig, run_sfla


def _channel(X) -> ChannelEnvironment:
    X = check_array(X, ensure_2d=False, dtype=np.float64)
    if X.ndim == 2:
        if X.shape[1] != 1:
            raise ValueError(f"expected one attenuation column, got shape {X.shape}")
        X = X[:, 0]
    return ChannelEnvironment(X)


class _PlanOptimizer(BaseEstimator):
    def _finish(self, env, plan: TransmissionPlan, trace=None):
        self.env_ = env
        self.n_subcarriers_ = env.n
        self.best_plan_ = plan
        self.breakdown_ = fitness(plan, env, mode_weights(self.mode))
        self.best_fitness_ = self.breakdown_.fitness
        self.trace_ = trace
        return self

    def predict(self, X=None) -> np.ndarray:
        check_is_fitted(self, "best_plan_")
        if X is not None:
            self._check_width(_channel(X))
        return np.column_stack([self.best_plan_.power, self.best_plan_.modulation])

    def score(self, X, y=None) -> float:
        """Fitness of the fitted plan on channel ``X`` (higher is better)."""
        check_is_fitted(self, "best_plan_")
        env = _channel(X)
        self._check_width(env)
        return PlanEvaluator(env, mode_weights(self.mode))(self.best_plan_)

    def _check_width(self, env):
        if env.n != self.n_subcarriers_:
            raise DomainError(f"fitted for {self.n_subcarriers_} subcarriers, got {env.n}")


class SFLAOptimizer(_PlanOptimizer):
    def __init__(self, mode="multimedia", population_size=100, memeplexes=10, local_iterations=None,
                 generations=2000, jump_rule="classic", s_max=None, random_state=0):
        self.mode = mode
        self.population_size = population_size
        self.memeplexes = memeplexes
        self.local_iterations = local_iterations
        self.generations = generations
        self.jump_rule = jump_rule
        self.s_max = s_max
        self.random_state = random_state

    def fit(self, X, y=None):
        env = _channel(X)
        config = SflaConfig(
            population_size=self.population_size,
            memeplexes=self.memeplexes,
            local_iterations=self.local_iterations,
            generations=self.generations,
            jump_rule=self.jump_rule,
            s_max=self.s_max,
            seed=self.random_state,
        )
        trace = run_sfla(config, env, mode_weights(self.mode))
        return self._finish(env, trace.best.plan, trace)


class GAOptimizer(_PlanOptimizer):
    def __init__(self, mode="multimedia", population_size=100, generations=2000, tournament_size=3,
                 crossover_rate=0.9, mutation_rate_per_gene=None, elitism_count=1, random_state=0):
        self.mode = mode
        self.population_size = population_size
        self.generations = generations
        self.tournament_size = tournament_size
        self.crossover_rate = crossover_rate
        self.mutation_rate_per_gene = mutation_rate_per_gene
        self.elitism_count = elitism_count
        self.random_state = random_state

    def fit(self, X, y=None):
        env = _channel(X)
        config = GaConfig(
            population_size=self.population_size,
            generations=self.generations,
            tournament_size=self.tournament_size,
            crossover_rate=self.crossover_rate,
            mutation_rate_per_gene=self.mutation_rate_per_gene,
            elitism_count=self.elitism_count,
            seed=self.random_state,
        )
        trace = run_ga(config, env, mode_weights(self.mode))
        return self._finish(env, trace.best.plan, trace)


class ExhaustiveOracle(_PlanOptimizer):
    """Brute force; one subcarrier, or two with ``allow_pairs``."""

    def __init__(self, mode="multimedia", allow_pairs=False):
        self.mode = mode
        self.allow_pairs = allow_pairs

    def fit(self, X, y=None):
        env = _channel(X)
        plan, _ = oracle_exhaustive(env, mode_weights(self.mode), allow_pairs=self.allow_pairs)
        return self._finish(env, plan)
