"""Sampling-based predictive rendezvous and docking simulator."""

from ._dockmpc import (
    Scenario,
    discretize,
    expm,
    load_scenario,
    run,
    solve_qp,
)

__all__ = [
    "Scenario",
    "discretize",
    "expm",
    "load_scenario",
    "run",
    "solve_qp",
]
