"""Optimal multi-agent path finding by conflict-based search with symmetry reasoning."""

from .cbs import CONFIG_NAMES, SolverConfig, SolveStats, config_from_name, solve, validate_solution
from .conflicts import Cardinality, Conflict, SymClass, detect_conflicts
from .constraints import Constraint, Kind
from .grid import GridMap, Instance, MapFormatError, load_instance, parse_map, parse_scen
from .oracle import joint_state_astar, verify_mutually_disjunctive

__all__ = [
    "CONFIG_NAMES",
    "Cardinality",
    "Conflict",
    "Constraint",
    "GridMap",
    "Instance",
    "Kind",
    "MapFormatError",
    "SolveStats",
    "SolverConfig",
    "SymClass",
    "config_from_name",
    "detect_conflicts",
    "joint_state_astar",
    "load_instance",
    "parse_map",
    "parse_scen",
    "solve",
    "validate_solution",
    "verify_mutually_disjunctive",
]
