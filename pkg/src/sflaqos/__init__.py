"""Power and modulation allocation for multi-carrier cognitive radio links.

Shuffled Frog Leaping and a GA baseline search per-subcarrier power and
modulation codes under a weighted throughput / BER / power objective.
"""

from .ga import GaConfig, run_ga
from .objective import (
    MODES,
    ModeWeights,
    ObjectiveBreakdown,
    PlanEvaluator,
    TransmissionMode,
    fitness,
    mode_weights,
)
from .radio import (
    ChannelEnvironment,
    DomainError,
    ModulationScheme,
    TransmissionPlan,
    ber,
    decode_modulation,
    decode_power,
    q_approx,
    sample_environment,
)
from .sfla import ConfigError, JumpRule, SflaConfig, run_sfla
from .trace import Frog, GenerationRecord, RunTrace

__version__ = "0.1.0"

__all__ = [
    "MODES",
    "ChannelEnvironment",
    "ConfigError",
    "DomainError",
    "Frog",
    "GaConfig",
    "GenerationRecord",
    "JumpRule",
    "ModeWeights",
    "ModulationScheme",
    "ObjectiveBreakdown",
    "PlanEvaluator",
    "RunTrace",
    "SflaConfig",
    "TransmissionMode",
    "TransmissionPlan",
    "ber",
    "decode_modulation",
    "decode_power",
    "fitness",
    "mode_weights",
    "q_approx",
    "run_ga",
    "run_sfla",
    "sample_environment",
]
