"""Python access to the polystate simulator core."""

from ._polystate import (
    Engine,
    PolystateError,
    Scenario,
    criteria,
    enumerate_branches,
    load_scenario,
    parse_scenario,
    run_cli,
    sample_outcomes,
)

__all__ = [
    "Engine",
    "PolystateError",
    "Scenario",
    "criteria",
    "enumerate_branches",
    "load_scenario",
    "parse_scenario",
    "run_cli",
    "sample_outcomes",
]
