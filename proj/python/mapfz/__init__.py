"""Makespan-optimal multi-agent pathfinding on weighted graphs."""

from ._core import (
    GraphError,
    Grid,
    Instance,
    InstanceError,
    IntGraph,
    ParseError,
    RealGraph,
    ScenarioEntry,
    build_grid_graph,
    discretization_error,
    discretize,
    lcb,
    make_instance,
    make_roadmap_instance,
    non_dominated_sort,
    parse_map,
    parse_roadmap,
    parse_scen,
    serialize_map,
    serialize_roadmap,
    serialize_scen,
    solve,
    tune,
    validate_solution,
)

__all__ = [name for name in dir() if not name.startswith("_")]
