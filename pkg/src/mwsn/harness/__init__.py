"""Scenarios, seeded deployments, experiment runs and output files."""
from .experiment import Summary, run_experiment
from .outputs import emit_outputs
from .scenario import PRESETS, Scenario, load_scenario, preset, scenario_from_dict

__all__ = [
    "PRESETS",
    "Scenario",
    "Summary",
    "emit_outputs",
    "load_scenario",
    "preset",
    "run_experiment",
    "scenario_from_dict",
]
