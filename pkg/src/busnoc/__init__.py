"""Cycle-accurate 2D-mesh wormhole NoC simulator with a global recovery bus:
inactivity-counter deadlock detection, bus-based recovery for true fully
adaptive routing, and XY / West-First / Odd-Even baselines."""

from .core import (
    ConfigError,
    Coord,
    Direction,
    Flit,
    FlitKind,
    Recovery,
    Routing,
    SimConfig,
    Traffic,
    index_to_coord,
    node_index,
)
from .engine import SimTimeout, Simulation, SimulationError, run
from .metrics import Report

__all__ = [
    "ConfigError",
    "Coord",
    "Direction",
    "Flit",
    "FlitKind",
    "Recovery",
    "Report",
    "Routing",
    "SimConfig",
    "SimTimeout",
    "Simulation",
    "SimulationError",
    "Traffic",
    "index_to_coord",
    "node_index",
    "run",
]
