"""Experiment descriptions and the flat ``key = value`` config format."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

from ..objective import MODES, TransmissionMode
from ..radio import DomainError
from ..sfla import ConfigError, JumpRule

EXPERIMENTS = ("convergence", "subcarrier_sweep", "memeplex_sweep", "timing", "sfla_vs_ga", "oracle_check")

# CLI subcommand names, also accepted as ``experiment`` values in config files
COMMANDS = {
    "convergence": "convergence",
    "sweep-n": "subcarrier_sweep",
    "sweep-m": "memeplex_sweep",
    "timing": "timing",
    "versus-ga": "sfla_vs_ga",
    "oracle": "oracle_check",
}

SWEEP_N = (8, 16, 32, 64, 128, 256, 512)

# Per-experiment defaults; anything not listed falls back to BASE_DEFAULTS.
BASE_DEFAULTS = dict(
    modes=MODES,
    n=(8,),
    population=100,
    memeplexes=(10,),
    generations=(2000,),
    local_iterations=None,
    jump_rule=JumpRule.SIGNED_CLASSIC,
    seeds=tuple(range(1, 11)),
    output=None,
)
EXPERIMENT_DEFAULTS = {
    "convergence": {},
    "subcarrier_sweep": dict(n=SWEEP_N, population=50, memeplexes=(5,), generations=(10000,)),
    "memeplex_sweep": dict(memeplexes=(5, 10, 15), generations=(500, 1000, 1500, 2000)),
    "timing": dict(n=SWEEP_N, seeds=tuple(range(1, 6))),
    "sfla_vs_ga": dict(n=SWEEP_N[:-1], population=50, memeplexes=(5,), generations=(10000,)),
    "oracle_check": dict(
        n=(1,), generations=(200,), jump_rule=JumpRule.PAPER_ABSOLUTE, seeds=tuple(range(1, 21))
    ),
}


class ValidationError(ConfigError):
    """A config value is out of range; ``field`` names the offending key."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class ParseError(ConfigError):
    """Malformed config text; ``line`` is 1-based."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class ExperimentSpec:
    experiment: str
    modes: tuple[TransmissionMode, ...]
    n: tuple[int, ...]
    population: int
    memeplexes: tuple[int, ...]
    generations: tuple[int, ...]
    local_iterations: int | None
    jump_rule: JumpRule
    seeds: tuple[int, ...]
    output: str | None = None

    def __post_init__(self):
        validate(self)

    def replace(self, **changes) -> "ExperimentSpec":
        return dataclasses.replace(self, **changes)


def _positive_ints(field: str, values, minimum: int = 1) -> None:
    if not values:
        raise ValidationError(field, "must not be empty")
    for v in values:
        if isinstance(v, bool) or not isinstance(v, int) or v < minimum:
            raise ValidationError(field, f"expected integers >= {minimum}, got {v!r}")


def validate(spec: ExperimentSpec) -> None:
    if spec.experiment not in EXPERIMENTS:
        raise ValidationError("experiment", f"unknown experiment {spec.experiment!r}")
    if not spec.modes:
        raise ValidationError("modes", "must not be empty")
    _positive_ints("n", spec.n)
    _positive_ints("population", (spec.population,), 2)
    _positive_ints("memeplexes", spec.memeplexes)
    _positive_ints("generations", spec.generations, 0)
    if spec.local_iterations is not None:
        _positive_ints("local_iterations", (spec.local_iterations,))
    if not spec.seeds:
        raise ValidationError("seeds", "must not be empty")
    for s in spec.seeds:
        if isinstance(s, bool) or not isinstance(s, int) or s < 0:
            raise ValidationError("seeds", f"expected non-negative integers, got {s!r}")
    too_many = [m for m in spec.memeplexes if m > spec.population]
    if too_many:
        raise ValidationError("memeplexes", f"{too_many[0]} exceeds population {spec.population}")
    if spec.experiment == "oracle_check" and any(n > 2 for n in spec.n):
        raise ValidationError("n", "oracle_check enumerates all plans and supports n <= 2 only")


def default_spec(experiment: str, **overrides) -> ExperimentSpec:
    if experiment not in EXPERIMENTS:
        raise ValidationError("experiment", f"unknown experiment {experiment!r}")
    values = {**BASE_DEFAULTS, **EXPERIMENT_DEFAULTS[experiment]}
    values.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentSpec(experiment=experiment, **values)


# --- text format -----------------------------------------------------------

_ALIASES = {
    "mode": "modes",
    "f": "population",
    "pop": "population",
    "population_size": "population",
    "m": "memeplexes",
    "generation": "generations",
    "seed": "seeds",
    "out": "output",
    "output_path": "output",
}
_KEYS = {f.name for f in dataclasses.fields(ExperimentSpec)}


def _int_list(text: str) -> tuple[int, ...]:
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part:
            lo, hi = part.split("-", 1)
            lo_i, hi_i = int(lo), int(hi)
            if hi_i < lo_i:
                raise ValueError(f"empty range {part!r}")
            out.extend(range(lo_i, hi_i + 1))
        else:
            out.append(int(part))
    return tuple(out)


def _convert(key: str, text: str):
    if key == "experiment":
        name = text.strip().lower()
        return COMMANDS.get(name, name.replace("-", "_"))
    if key == "modes":
        return tuple(TransmissionMode.parse(t) for t in text.split(",") if t.strip())
    if key in ("n", "memeplexes", "generations", "seeds"):
        return _int_list(text)
    if key == "population":
        return int(text)
    if key == "local_iterations":
        return None if text.strip().lower() in ("", "auto", "none") else int(text)
    if key == "jump_rule":
        return JumpRule.parse(text)
    if key == "output":
        return text.strip() or None
    raise KeyError(key)


def parse_config(text: str) -> ExperimentSpec:
    """Parse ``key = value`` lines into a validated spec with defaults applied.

    ``#`` starts a comment. Lists are comma separated; integer lists also
    accept ranges such as ``1-10``.
    """
    values: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(lineno, f"expected 'key = value', got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        key = _ALIASES.get(key.lower(), key.lower())
        if key not in _KEYS:
            raise ParseError(lineno, f"unknown key {key!r}")
        if key in values:
            raise ParseError(lineno, f"duplicate key {key!r}")
        try:
            values[key] = _convert(key, value)
        except (ValueError, DomainError) as exc:
            raise ParseError(lineno, f"bad value for {key!r}: {exc}") from None
    if "experiment" not in values:
        raise ValidationError("experiment", "missing required key")
    experiment = values.pop("experiment")
    return default_spec(experiment, **values)


def load_config(path) -> ExperimentSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def emit_config(spec: ExperimentSpec) -> str:
    """Render ``spec`` in the format :func:`parse_config` reads."""

    def ints(xs):
        return ", ".join(str(x) for x in xs)

    lines = [
        f"experiment = {spec.experiment}",
        f"modes = {', '.join(m.value for m in spec.modes)}",
        f"n = {ints(spec.n)}",
        f"population = {spec.population}",
        f"memeplexes = {ints(spec.memeplexes)}",
        f"generations = {ints(spec.generations)}",
        f"local_iterations = {'auto' if spec.local_iterations is None else spec.local_iterations}",
        f"jump_rule = {spec.jump_rule.value}",
        f"seeds = {ints(spec.seeds)}",
    ]
    if spec.output is not None:
        lines.append(f"output = {spec.output}")
    return "\n".join(lines) + "\n"
