"""Experiment harness: configurations, scenarios, CSV emission, CLI."""

from semiwave.harness.cli import main
from semiwave.harness.config import (
    SCENARIO_NAMES,
    ConfigError,
    ExperimentConfig,
    default_config_path,
    validate_config,
)
from semiwave.harness.emit import emit, format_float
from semiwave.harness.scenarios import (
    SCENARIOS,
    ReportRow,
    ScenarioResult,
    run_scenario,
)

__all__ = [
    "SCENARIOS",
    "SCENARIO_NAMES",
    "ConfigError",
    "ExperimentConfig",
    "ReportRow",
    "ScenarioResult",
    "default_config_path",
    "emit",
    "format_float",
    "main",
    "run_scenario",
    "validate_config",
]
