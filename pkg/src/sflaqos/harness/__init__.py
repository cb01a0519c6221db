"""Experiment harness: specs, seeded runners, the exhaustive oracle and the CLI."""

from .experiments import (
    CSV_COLUMNS,
    ResultRow,
    environment_for,
    read_csv,
    run_convergence,
    run_experiment,
    run_memeplex_sweep,
    run_oracle_check,
    run_sfla_vs_ga,
    run_subcarrier_sweep,
    run_timing,
    save_csv,
    to_csv,
)
from .oracle import oracle_exhaustive
from .spec import (
    EXPERIMENTS,
    ExperimentSpec,
    ParseError,
    ValidationError,
    default_spec,
    emit_config,
    load_config,
    parse_config,
)

__all__ = [
    "CSV_COLUMNS",
    "EXPERIMENTS",
    "ExperimentSpec",
    "ParseError",
    "ResultRow",
    "ValidationError",
    "default_spec",
    "emit_config",
    "environment_for",
    "load_config",
    "oracle_exhaustive",
    "parse_config",
    "read_csv",
    "run_convergence",
    "run_experiment",
    "run_memeplex_sweep",
    "run_oracle_check",
    "run_sfla_vs_ga",
    "run_subcarrier_sweep",
    "run_timing",
    "save_csv",
    "to_csv",
]
