"""Exhaustive search over every code combination, for tiny instances."""

from __future__ import annotations

import itertools

from ..objective import ModeWeights, fitness
from ..radio import MOD_CODE_MAX, MOD_CODE_MIN, N_POWER_CODES, ChannelEnvironment, TransmissionPlan
from ..sfla import ConfigError

SETTINGS_PER_SUBCARRIER = N_POWER_CODES * (MOD_CODE_MAX - MOD_CODE_MIN + 1)


def _settings():
    for power in range(N_POWER_CODES):
        for modulation in range(MOD_CODE_MIN, MOD_CODE_MAX + 1):
            yield power, modulation


def oracle_exhaustive(
    env: ChannelEnvironment, weights: ModeWeights, *, allow_pairs: bool = False
) -> tuple[TransmissionPlan, float]:
    """Return the fittest plan and its fitness by brute force.

    Scans power ascending, then modulation ascending; the first plan reaching
    the maximum wins ties. Uses the direct formula path, not the tabulated
    evaluator the optimizers use. Only ``n == 1`` (1034 plans) is accepted
    unless ``allow_pairs`` unlocks ``n == 2`` (about 1.07M plans).
    """
    limit = 2 if allow_pairs else 1
    if env.n > limit:
        raise ConfigError(
            f"exhaustive search refused for n={env.n}; "
            + ("n <= 2 only" if allow_pairs else "pass allow_pairs=True for n=2")
        )
    best_plan, best_fit = None, float("-inf")
    for combo in itertools.product(_settings(), repeat=env.n):
        plan = TransmissionPlan.from_settings(combo)
        f = fitness(plan, env, weights).fitness
        if f > best_fit:
            best_plan, best_fit = plan, f
    return best_plan, best_fit
