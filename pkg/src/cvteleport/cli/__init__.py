"""Command-line driver."""

from .main import main
from .scenario import Scenario, load_scenario, scenario_from_dict
from .sweep import SweepResult, emit, load_result, run_scenario

__all__ = ["Scenario", "SweepResult", "emit", "load_result", "load_scenario", "main", "run_scenario", "scenario_from_dict"]
