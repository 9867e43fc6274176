"""Consensus protocols as per-node machines for the round engine."""
from .exhaustive import (
    Algorithm1,
    Algorithm3,
    PhaseConfig,
    PhaseProtocol,
    PhaseSnapshot,
    ProtocolInfeasible,
    compute_partition,
    enumerate_phases,
    monochrome_family,
    phase_count,
    run_algorithm1,
    run_algorithm3,
    step_c_case_select,
    step_c_update,
)
from .flooding import FloodMemo, FloodTables, apply_flood_rules
from .payloads import Decision, Report, deserialize, serialize
from .identification import (
    Algorithm2,
    Assessment,
    ReliableReceipt,
    ReportView,
    identify_faulty,
    majority,
    reliable_receive,
    run_algorithm2,
)

__all__ = [
    "Algorithm1",
    "Algorithm2",
    "Algorithm3",
    "Assessment",
    "Decision",
    "FloodMemo",
    "FloodTables",
    "PhaseConfig",
    "PhaseProtocol",
    "PhaseSnapshot",
    "ProtocolInfeasible",
    "ReliableReceipt",
    "Report",
    "ReportView",
    "apply_flood_rules",
    "compute_partition",
    "deserialize",
    "enumerate_phases",
    "identify_faulty",
    "majority",
    "monochrome_family",
    "phase_count",
    "reliable_receive",
    "run_algorithm1",
    "run_algorithm2",
    "run_algorithm3",
    "serialize",
    "step_c_case_select",
    "step_c_update",
]
