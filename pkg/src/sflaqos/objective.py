"""QoS criteria, transmission-mode weights and the weighted-sum fitness."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .radio import (
    BER_FLOOR,
    M_MAX,
    MOD_CODE_MAX,
    MOD_CODE_MIN,
    N_POWER_CODES,
    P_MAX_MW,
    ChannelEnvironment,
    DomainError,
    TransmissionPlan,
    ber,
    bits_per_symbol,
    decode_modulation,
    decode_power,
    snr,
)

_LOG10_HALF = math.log10(0.5)
_LOG2_MMAX = math.log2(M_MAX)
WEIGHT_TOL = 1e-12


@dataclass(frozen=True)
class ModeWeights:
    w_rate: float
    w_ber: float
    w_power: float

    def __post_init__(self):
        ws = (self.w_rate, self.w_ber, self.w_power)
        if any(not (0.0 <= w <= 1.0) for w in ws):
            raise DomainError(f"weights must lie in [0, 1], got {ws}")
        if abs(sum(ws) - 1.0) > WEIGHT_TOL:
            raise DomainError(f"weights must sum to 1, got {sum(ws)!r}")

    @classmethod
    def normalized(cls, w_rate: float, w_ber: float, w_power: float) -> "ModeWeights":
        """Rescale non-negative weights to sum to one."""
        total = w_rate + w_ber + w_power
        if total <= 0:
            raise DomainError("at least one weight must be positive")
        return cls(w_rate / total, w_ber / total, 1.0 - w_rate / total - w_ber / total)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.w_rate, self.w_ber, self.w_power)


class TransmissionMode(enum.Enum):
    URGENCE = "urgence"
    MULTIMEDIA = "multimedia"
    BATTERIE_FAIBLE = "batterie_faible"

    @classmethod
    def parse(cls, value) -> "TransmissionMode":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("-", "_").replace("é", "e")
        aliases = {"emergency": "urgence", "low_battery": "batterie_faible", "batteriefaible": "batterie_faible"}
        key = aliases.get(key, key)
        try:
            return cls(key)
        except ValueError:
            names = ", ".join(m.value for m in cls)
            raise DomainError(f"unknown transmission mode {value!r} (expected one of {names})") from None


_MODE_WEIGHTS = {
    TransmissionMode.URGENCE: ModeWeights(0.05, 0.80, 0.15),
    TransmissionMode.MULTIMEDIA: ModeWeights(0.80, 0.05, 0.15),
    TransmissionMode.BATTERIE_FAIBLE: ModeWeights(0.05, 0.15, 0.80),
}

MODES = tuple(TransmissionMode)


def mode_weights(mode) -> ModeWeights:
    return _MODE_WEIGHTS[TransmissionMode.parse(mode)]


@dataclass(frozen=True)
class ObjectiveBreakdown:
    f_rate: float
    f_ber: float
    f_power: float
    fitness: float
    mean_ber: float


def throughput_objective(plan: TransmissionPlan) -> float:
    """Mean over subcarriers of log2(M) / log2(M_max)."""
    return float(np.mean(bits_per_symbol(plan.modulation) / _LOG2_MMAX))


def ber_score(mean_ber: float) -> float:
    """1 - log10(0.5) / log10(P), with P clamped into [1e-300, 0.5]."""
    p = min(max(float(mean_ber), BER_FLOOR), 0.5)
    return 1.0 - _LOG10_HALF / math.log10(p)


def mean_ber(plan: TransmissionPlan, env: ChannelEnvironment) -> float:
    _check_dims(plan, env)
    s = snr(decode_power(plan.power), env.noise_lin)
    per_sub = [ber(decode_modulation(int(c)), s[i]) for i, c in enumerate(plan.modulation)]
    return float(np.mean(per_sub))


def ber_objective(plan: TransmissionPlan, env: ChannelEnvironment) -> float:
    return ber_score(mean_ber(plan, env))


def power_objective(plan: TransmissionPlan) -> float:
    """1 - sum(P_i) / (n * P_max)."""
    total = float(np.sum(decode_power(plan.power)))
    return 1.0 - total / (plan.n * P_MAX_MW)


def _check_dims(plan: TransmissionPlan, env: ChannelEnvironment) -> None:
    if plan.n != env.n:
        raise DomainError(f"plan has {plan.n} subcarriers but environment has {env.n}")


def combine(weights: ModeWeights, f_rate: float, f_ber: float, f_power: float) -> float:
    return weights.w_rate * f_rate + weights.w_ber * f_ber + weights.w_power * f_power


def fitness(plan: TransmissionPlan, env: ChannelEnvironment, weights: ModeWeights) -> ObjectiveBreakdown:
    """Evaluate every criterion directly from the formulas and weight them."""
    _check_dims(plan, env)
    pbe = mean_ber(plan, env)
    f_rate = throughput_objective(plan)
    f_ber = ber_score(pbe)
    f_power = power_objective(plan)
    return ObjectiveBreakdown(f_rate, f_ber, f_power, combine(weights, f_rate, f_ber, f_power), pbe)


class PlanEvaluator:
    """Fast fitness for raw code arrays against one fixed environment and weighting.

    Per-subcarrier BER for every (power, modulation) code pair is tabulated
    once, so scoring a plan is a table walk. Works on a single plan (shape
    ``(n,)``) or a stack of plans (shape ``(k, n)``).
    """

    def __init__(self, env: ChannelEnvironment, weights: ModeWeights):
        self.env = env
        self.weights = weights
        self.n = env.n
        powers = decode_power(np.arange(N_POWER_CODES))
        s = snr(powers[None, :], env.noise_lin[:, None])  # (n, 94)
        n_mod = MOD_CODE_MAX - MOD_CODE_MIN + 1
        table = np.empty((self.n, N_POWER_CODES, n_mod))
        for c in range(MOD_CODE_MIN, MOD_CODE_MAX + 1):
            table[:, :, c - MOD_CODE_MIN] = ber(decode_modulation(c), s)
        rate = np.array([bits_per_symbol(c) / _LOG2_MMAX for c in range(MOD_CODE_MIN, MOD_CODE_MAX + 1)])
        # flat index: sub * 94 * 11 + power * 11 + (mod - 1)
        self.tables = (
            table.reshape(-1),
            rate,
            np.ascontiguousarray(powers, dtype=float),
            N_POWER_CODES * n_mod,
            n_mod,
            1.0 / (self.n * P_MAX_MW),
            np.array(weights.as_tuple()),
        )

    def score(self, power, modulation):
        """Fitness of one plan (float) or of each row of a plan stack (array)."""
        power = np.asarray(power, dtype=np.int64)
        modulation = np.asarray(modulation, dtype=np.int64)
        self._check_shape(power, modulation)
        if power.ndim == 1:
            return float(_kernels.score_one(*self.tables, power, modulation))
        flat_p = power.reshape(-1, self.n)
        flat_m = modulation.reshape(-1, self.n)
        return _kernels.score_many(*self.tables, flat_p, flat_m).reshape(power.shape[:-1])

    def score_codes(self, codes: np.ndarray):
        """Same as :meth:`score` for a ``(..., 2, n)`` array of power/modulation rows."""
        return self.score(codes[..., 0, :], codes[..., 1, :])

    def breakdown(self, power, modulation) -> ObjectiveBreakdown:
        power = np.asarray(power, dtype=np.int64)
        modulation = np.asarray(modulation, dtype=np.int64)
        self._check_shape(power, modulation)
        if power.ndim != 1:
            raise DomainError("breakdown takes a single plan")
        out = np.empty(5)
        _kernels.score_row(*self.tables, power, modulation, out)
        f_rate, f_ber, f_power, pbe, fit = (float(v) for v in out)
        return ObjectiveBreakdown(f_rate, f_ber, f_power, fit, pbe)

    def _check_shape(self, power, modulation) -> None:
        if power.shape != modulation.shape or power.ndim == 0 or power.shape[-1] != self.n:
            raise DomainError(f"code arrays must end in {self.n} subcarriers, got {power.shape} and {modulation.shape}")

    def __call__(self, plan: TransmissionPlan) -> float:
        _check_dims(plan, self.env)
        return self.score(plan.power, plan.modulation)
