"""Day-ahead robust microgrid scheduling.

Minimizes the social net cost of a grid-connected microgrid (generation,
storage, elastic demand, plus the worst-case cost of trading against the
main grid under polyhedral renewable uncertainty), either through a
distributed dual-decomposition loop or through an exact centralized solve
used to certify it.
"""

from .scenario import Scenario, builtin_scenario, load_scenario, save_scenario, validate_scenario

__all__ = [
    "Scenario",
    "builtin_scenario",
    "load_scenario",
    "save_scenario",
    "validate_scenario",
]

__version__ = "0.1.0"
