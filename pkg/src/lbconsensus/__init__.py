"""Byzantine binary consensus under local broadcast and hybrid communication.

Submodules:

``graph_core``           graphs, disjoint paths, vertex connectivity
``feasibility``          achievability checks per communication model
``netsim``               lockstep round engine and execution traces
``protocols``            the three consensus protocols and flooding
``adversaries``          Byzantine behaviours
``indistinguishability`` split networks and derived executions
``invariants``           per-phase trace checks
``harness``              graph generators, sweeps and replay
"""
from .feasibility import FaultModel, FeasibilityReport, check, check_hybrid, check_local_broadcast, check_point_to_point
from .graph_core import Graph, read_graph, vertex_connectivity, write_graph
from .netsim import ExecutionTrace, run_synchronous
from .protocols import Algorithm1, Algorithm2, Algorithm3, run_algorithm1, run_algorithm2, run_algorithm3

__version__ = "0.1.0"

__all__ = [
    "Algorithm1",
    "Algorithm2",
    "Algorithm3",
    "ExecutionTrace",
    "FaultModel",
    "FeasibilityReport",
    "Graph",
    "check",
    "check_hybrid",
    "check_local_broadcast",
    "check_point_to_point",
    "read_graph",
    "run_algorithm1",
    "run_algorithm2",
    "run_algorithm3",
    "run_synchronous",
    "vertex_connectivity",
    "write_graph",
]
