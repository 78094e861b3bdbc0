# Package marker - scenarios and their applications
from scenario.loader import enumerate_applications, parse_scenario, stop_condition
from scenario.models import REGISTERED_PARAMETERS, ApplicationSpec, ScenarioSpec, StopSpec

__all__ = [
    "REGISTERED_PARAMETERS",
    "ApplicationSpec",
    "ScenarioSpec",
    "StopSpec",
    "enumerate_applications",
    "parse_scenario",
    "stop_condition",
]
