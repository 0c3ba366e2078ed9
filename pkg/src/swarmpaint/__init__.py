"""Distributed strip painting by oblivious robot swarms: simulator and checks.

N point robots with private, possibly mirrored and rescaled coordinate
frames split a known rectangle into N horizontal strips by ranking
themselves on height, move collision-free to their strip corners under an
asynchronous scheduler, and paint their strips with back-and-forth sweeps
of a 2*eta brush.  The package provides the pure per-robot decision rules,
a deterministic discrete-event simulator, independent verification
oracles, a scenario library, and a CLI.
"""

from .engine import (
    Mode,
    RobotState,
    ScheduleConfig,
    SimEvent,
    Trace,
    check_no_crossing,
    run,
    step_motion,
)
from .errors import (
    ConfigurationError,
    LivenessError,
    ProtocolViolation,
    StripTooThinError,
)
from .geometry import LocalFrame, Snapshot, WorldRect, observe, to_global, to_local
from .protocol import (
    Destination,
    PaintPath,
    Rank,
    Strip,
    TieDecision,
    compute_destination,
    compute_rank,
    compute_strip,
    decide_tie,
    generate_paint_path,
    strip_empty,
)
from .scenario import (
    RobotSpec,
    Scenario,
    bundled_names,
    load_bundled,
    load_scenario,
    random_scenario,
    run_scenario,
    save_scenario,
)
from .traceio import dumps_trace, read_trace, trace_hash, write_trace
from .verify import (
    brute_force_assignment,
    exhaustive_schedule_check,
    run_all_checks,
    verify_coverage,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigurationError",
    "Destination",
    "LivenessError",
    "LocalFrame",
    "Mode",
    "PaintPath",
    "ProtocolViolation",
    "Rank",
    "RobotSpec",
    "RobotState",
    "Scenario",
    "ScheduleConfig",
    "SimEvent",
    "Snapshot",
    "Strip",
    "StripTooThinError",
    "TieDecision",
    "Trace",
    "WorldRect",
    "brute_force_assignment",
    "bundled_names",
    "check_no_crossing",
    "compute_destination",
    "compute_rank",
    "compute_strip",
    "decide_tie",
    "dumps_trace",
    "exhaustive_schedule_check",
    "generate_paint_path",
    "load_bundled",
    "load_scenario",
    "observe",
    "random_scenario",
    "read_trace",
    "run",
    "run_all_checks",
    "run_scenario",
    "save_scenario",
    "step_motion",
    "strip_empty",
    "to_global",
    "to_local",
    "trace_hash",
    "verify_coverage",
    "write_trace",
]
